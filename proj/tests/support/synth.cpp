#include "synth.hpp"

#include <algorithm>
#include <cmath>

namespace oestylo::synth {

FullLineDistribution random_full_distribution(Xoshiro256& gen, double floor) {
    FullLineDistribution d{};
    double total = 0.0;
    for (auto& p : d) {
        p = floor + gen.uniform();
        total += p;
    }
    for (auto& p : d) p /= total;
    return d;
}

FullLineDistribution shifted_distribution(const FullLineDistribution& base, double tv, Xoshiro256& gen) {
    // Move `tv` of mass from a random half of the categories to the other half,
    // proportionally, never driving a category negative.
    std::array<int, 25> order{};
    for (int i = 0; i < 25; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = 24; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[gen.below(static_cast<std::uint64_t>(i + 1))]);
    double donor_mass = 0.0;
    for (int i = 0; i < 12; ++i) donor_mass += base[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    double receiver_mass = 1.0 - donor_mass;
    const double move = std::min(tv, donor_mass * 0.95);
    FullLineDistribution out = base;
    for (int i = 0; i < 25; ++i) {
        const auto c = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
        if (i < 12) out[c] -= move * base[c] / donor_mass;
        else out[c] += move * base[c] / receiver_mass;
    }
    return out;
}

Poem scanned_poem(const std::string& id, int lines, const std::function<FullLineDistribution(int)>& dist,
                  Xoshiro256& gen, double missing_rate) {
    Poem poem;
    poem.id = id;
    poem.has_scansion = true;
    for (int i = 1; i <= lines; ++i) {
        const auto d = dist(i);
        std::array<double, 25> cum{};
        double acc = 0.0;
        for (std::size_t j = 0; j < 25; ++j) {
            acc += d[j];
            cum[j] = acc;
        }
        const auto cat = static_cast<int>(gen.categorical(cum));
        VerseLine line;
        line.index = i;
        line.a_text = "a" + std::to_string(i);
        line.b_text = "b" + std::to_string(i);
        line.a_pattern = static_cast<Scansion>('A' + cat / 5);
        line.b_pattern = static_cast<Scansion>('A' + cat % 5);
        if (missing_rate > 0.0 && gen.uniform() < missing_rate) {
            if (gen.below(2) == 0) line.a_pattern.reset();
            else line.b_pattern.reset();
        }
        poem.lines.push_back(std::move(line));
    }
    poem.parts.push_back({id, 1, lines});
    return poem;
}

TextStyle style_a() {
    return {{"a", "e", "o", "n", "r", "l", "h", "w", "m", "s", "t", "i", "u", "d", "g", "þ"},
            {9, 7, 6, 6, 5, 5, 4, 4, 3, 3, 3, 3, 2, 2, 2, 1}};
}

TextStyle style_b() {
    return {{"æ", "e", "y", "c", "g", "ð", "f", "b", "s", "t", "i", "a", "d", "p", "r", "k"},
            {8, 6, 6, 5, 5, 5, 4, 4, 4, 3, 3, 2, 2, 2, 2, 1}};
}

TextStyle style_mixed() {
    return {{"a", "e", "o", "n", "r", "l", "h", "w", "m", "s", "t", "i", "u", "d", "g", "þ"},
            {8, 7, 6, 6, 5, 5, 4, 4, 3, 3, 3, 3, 3, 2, 2, 2}};
}

std::string random_half_line(const TextStyle& style, Xoshiro256& gen) {
    std::vector<double> cum;
    double acc = 0.0;
    for (double w : style.weights) {
        acc += w;
        cum.push_back(acc);
    }
    std::string out;
    const int words = 2 + static_cast<int>(gen.below(2));
    for (int w = 0; w < words; ++w) {
        if (w) out += ' ';
        const int len = 3 + static_cast<int>(gen.below(5));
        for (int c = 0; c < len; ++c) out += style.letters[gen.categorical(cum)];
    }
    return out;
}

Poem text_poem(const std::string& id, int lines, const TextStyle& first, const TextStyle& second, int switch_line,
               Xoshiro256& gen) {
    Poem poem;
    poem.id = id;
    for (int i = 1; i <= lines; ++i) {
        const TextStyle& s = i < switch_line ? first : second;
        VerseLine line;
        line.index = i;
        line.a_text = random_half_line(s, gen);
        line.b_text = random_half_line(s, gen) + (gen.below(4) == 0 ? "." : ",");
        poem.lines.push_back(std::move(line));
    }
    if (switch_line > 1 && switch_line <= lines) {
        poem.parts.push_back({"A", 1, switch_line - 1});
        poem.parts.push_back({"B", switch_line, lines});
    } else {
        poem.parts.push_back({"A", 1, lines});
    }
    return poem;
}

Corpus fixture_corpus(std::uint64_t seed, int total_lines) {
    Xoshiro256 gen(RngStream{seed, 0xF1C7});
    Corpus corpus;
    const std::vector<std::pair<std::string, double>> shares = {
        {"beowulf", 0.32}, {"genesis", 0.29}, {"andreas", 0.17}, {"christ", 0.17}, {"fates", 0.02}, {"elene", 0.03}};
    // Shared compound vocabulary with a long tail.
    std::vector<std::string> vocab;
    for (int i = 0; i < 1500; ++i) vocab.push_back("cmp" + std::to_string(i));
    std::vector<double> zipf;
    double acc = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        acc += 1.0 / std::pow(static_cast<double>(i) + 1.0, 0.8);
        zipf.push_back(acc);
    }
    const auto base = random_full_distribution(gen);
    const auto shifted = shifted_distribution(base, 0.1, gen);
    int unique_counter = 0;
    for (std::size_t p = 0; p < shares.size(); ++p) {
        const auto& [id, share] = shares[p];
        const int lines = std::max(120, static_cast<int>(share * total_lines));
        const int switch_line = lines * 2 / 3;
        Poem poem = text_poem(id, lines, style_a(), p % 2 == 0 ? style_b() : style_a(), switch_line, gen);
        poem.has_scansion = true;
        poem.has_compounds = true;
        for (auto& line : poem.lines) {
            const auto& d = line.index < switch_line ? base : shifted;
            std::array<double, 25> cum{};
            double c = 0.0;
            for (std::size_t j = 0; j < 25; ++j) {
                c += d[j];
                cum[j] = c;
            }
            const auto cat = static_cast<int>(gen.categorical(cum));
            line.a_pattern = static_cast<Scansion>('A' + cat / 5);
            line.b_pattern = static_cast<Scansion>('A' + cat % 5);
            if (gen.uniform() < 0.01) line.b_pattern.reset();
            if (gen.uniform() < 0.35) line.compounds.push_back(vocab[gen.categorical(zipf)]);
            if (gen.uniform() < 0.05) line.compounds.push_back("hapax" + std::to_string(unique_counter++));
        }
        corpus.poems.push_back(std::move(poem));
    }
    return corpus;
}

}  // namespace oestylo::synth
