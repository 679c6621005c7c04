#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "oestylo/error.hpp"
#include "oestylo/ngram.hpp"
#include "oestylo/utf8.hpp"
#include "synth.hpp"

using namespace oestylo;

namespace {

ngram::DistanceMatrix random_matrix(int n, Xoshiro256& gen, bool coarse) {
    ngram::DistanceMatrix d;
    for (int i = 0; i < n; ++i) d.ids.push_back("s" + std::to_string(100 + i));
    d.values.assign(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            // Coarse values force many ties through the tie-break rule.
            const double v = coarse ? static_cast<double>(gen.below(6)) / 5.0 : gen.uniform();
            d.at(i, j) = v;
            d.at(j, i) = v;
        }
    }
    return d;
}

// Naive complete linkage: cluster distances recomputed from the leaves at
// every step; ties go to the lexicographically smallest (min id, max id).
std::vector<ngram::Merge> brute_force_complete(const ngram::DistanceMatrix& d) {
    const int n = static_cast<int>(d.size());
    std::map<int, std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) clusters[i] = {i};
    std::vector<ngram::Merge> merges;
    int next = n;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::pair<int, int> best_pair{-1, -1};
        for (auto a = clusters.begin(); a != clusters.end(); ++a) {
            for (auto b = std::next(a); b != clusters.end(); ++b) {
                double link = 0.0;
                for (int x : a->second)
                    for (int y : b->second) link = std::max(link, d.at(x, y));
                const std::pair<int, int> key{std::min(a->first, b->first), std::max(a->first, b->first)};
                if (link < best || (link == best && key < best_pair)) {
                    best = link;
                    best_pair = key;
                }
            }
        }
        auto members = clusters[best_pair.first];
        const auto& other = clusters[best_pair.second];
        members.insert(members.end(), other.begin(), other.end());
        clusters.erase(best_pair.first);
        clusters.erase(best_pair.second);
        merges.push_back({best_pair.first, best_pair.second, best, static_cast<int>(members.size())});
        clusters[next++] = std::move(members);
    }
    return merges;
}

ngram::LabeledText text(const std::string& id, const std::string& raw) { return {id, ngram::normalize(raw)}; }

}  // namespace

TEST_CASE("normalization") {
    CHECK(utf8::from_u32(ngram::normalize("  Hwæt! We Gar-Dena,\tin  geardagum;  ")) == "hwæt we gardena in geardagum");
    CHECK(utf8::from_u32(ngram::normalize("ÆÞÐ “sweord” eorðb... ..g")) == "æþð sweord eorðb g");
}

TEST_CASE("profiles") {
    SUBCASE("definition check") {
        const auto set = ngram::build_profiles({text("x", "aaa"), text("y", "ab ab")}, 2, 10);
        const auto it = std::find(set.features.begin(), set.features.end(), "aa");
        REQUIRE(it != set.features.end());
        const auto f = static_cast<std::size_t>(it - set.features.begin());
        CHECK(set.profiles[0].values[f] == doctest::Approx(1.0));  // both bigrams of "aaa"
        // The word boundary is kept as a space inside grams.
        CHECK(std::find(set.features.begin(), set.features.end(), "b ") != set.features.end());
    }
    SUBCASE("ranking ties are lexicographic and k saturates") {
        const auto set = ngram::build_profiles({text("x", "abcd"), text("y", "dcba")}, 2, 100);
        CHECK(set.features == std::vector<std::string>{"ab", "ba", "bc", "cb", "cd", "dc"});
        const auto top = ngram::build_profiles({text("x", "abcd"), text("y", "dcba")}, 2, 2);
        CHECK(top.features == std::vector<std::string>{"ab", "ba"});
    }
    SUBCASE("disjoint alphabets are orthogonal") {
        const auto set = ngram::build_profiles({text("x", "abab abab"), text("y", "cdcd cdcd")}, 3, 50);
        const auto d = ngram::cosine_distance_matrix(set);
        CHECK(d.at(0, 1) == doctest::Approx(1.0));
    }
    SUBCASE("errors") {
        CHECK_THROWS_WITH_AS(ngram::build_profiles({text("short", "ab"), text("y", "abcdef")}, 3, 10),
                             doctest::Contains("short"), Error);
        CHECK_THROWS_AS(ngram::build_profiles({text("x", "abcdef")}, 6, 10), Error);
        CHECK_THROWS_AS(ngram::build_profiles({text("x", "abcdef")}, 1, 10), Error);
    }
}

TEST_CASE("cosine distances") {
    ngram::ProfileSet set;
    set.features = {"f1", "f2"};
    set.profiles = {{"v", {1, 1}}, {"w", {1, 0}}, {"v2", {3, 3}}, {"z", {0, 0}}};
    CHECK_THROWS_WITH_AS(ngram::cosine_distance_matrix(set), doctest::Contains("z"), Error);
    set.profiles.pop_back();
    const auto d = ngram::cosine_distance_matrix(set);
    CHECK(d.at(0, 1) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));
    CHECK(d.at(0, 2) == doctest::Approx(0.0));
    CHECK(d.at(1, 1) == 0.0);
}

TEST_CASE("profile and distance invariants on generated text") {
    Xoshiro256 gen(RngStream{81, 0});
    std::vector<ngram::LabeledText> samples, doubled;
    for (int s = 0; s < 8; ++s) {
        std::string raw;
        for (int l = 0; l < 40; ++l) raw += synth::random_half_line(s < 4 ? synth::style_a() : synth::style_b(), gen) + " ";
        samples.push_back(text("s" + std::to_string(s), raw));
        doubled.push_back(text("s" + std::to_string(s), raw + raw));
    }
    for (int n = 2; n <= 5; ++n) {
        const auto d = ngram::cosine_distance_matrix(ngram::build_profiles(samples, n, 200));
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(d.at(i, i) == 0.0);
            for (std::size_t j = 0; j < d.size(); ++j) {
                CHECK(d.at(i, j) == d.at(j, i));
                CHECK(d.at(i, j) >= 0.0);
                CHECK(d.at(i, j) <= 1.0);
            }
        }
        // Repeating every text leaves relative frequencies, hence distances,
        // unchanged up to the single boundary gram at the seam.
        const auto dd = ngram::cosine_distance_matrix(ngram::build_profiles(doubled, n, 200));
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j) CHECK(dd.at(i, j) == doctest::Approx(d.at(i, j)).epsilon(0.05));
    }
}

TEST_CASE("complete linkage matches a brute-force oracle") {
    Xoshiro256 gen(RngStream{91, 0});
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = random_matrix(20, gen, trial % 2 == 1);
        const auto tree = ngram::agglomerative_complete(d);
        const auto oracle = brute_force_complete(d);
        REQUIRE(tree.merges.size() == oracle.size());
        for (std::size_t m = 0; m < oracle.size(); ++m) {
            CAPTURE(trial);
            CAPTURE(m);
            CHECK(tree.merges[m].node_a == oracle[m].node_a);
            CHECK(tree.merges[m].node_b == oracle[m].node_b);
            CHECK(tree.merges[m].height == oracle[m].height);
            CHECK(tree.merges[m].size == oracle[m].size);
        }
    }
}

TEST_CASE("forced-order and tie examples") {
    ngram::DistanceMatrix d;
    d.ids = {"1", "2", "3"};
    d.values = {0, 0.1, 0.9, 0.1, 0, 0.9, 0.9, 0.9, 0};
    const auto tree = ngram::agglomerative_complete(d);
    REQUIRE(tree.merges.size() == 2);
    CHECK(tree.merges[0].node_a == 0);
    CHECK(tree.merges[0].node_b == 1);
    CHECK(tree.merges[0].height == 0.1);
    CHECK(tree.merges[1].node_a == 2);
    CHECK(tree.merges[1].node_b == 3);
    CHECK(tree.merges[1].height == 0.9);
    CHECK(tree.members(4) == std::vector<int>{0, 1, 2});
    const auto top = ngram::top_two_assignment(tree);
    CHECK(top.at("1") == 0);
    CHECK(top.at("2") == 0);
    CHECK(top.at("3") == 1);

    ngram::DistanceMatrix eq;
    eq.ids = {"a", "b", "c", "d"};
    eq.values.assign(16, 0.5);
    for (int i = 0; i < 4; ++i) eq.at(i, i) = 0.0;
    const auto t = ngram::agglomerative_complete(eq);
    CHECK(t.merges[0].node_a == 0);
    CHECK(t.merges[0].node_b == 1);
    CHECK(t.merges[1].node_a == 2);
    CHECK(t.merges[1].node_b == 3);
    CHECK(t.merges[2].node_a == 4);
    CHECK(t.merges[2].node_b == 5);

    ngram::DistanceMatrix two;
    two.ids = {"leaf1", "leaf2"};
    two.values = {0, 0.3, 0.3, 0};
    const auto a = ngram::top_two_assignment(ngram::agglomerative_complete(two));
    CHECK(a.at("leaf1") == 0);
    CHECK(a.at("leaf2") == 1);
}

TEST_CASE("clustering quality") {
    const std::map<std::string, std::string> truth{{"a", "X"}, {"b", "X"}, {"c", "Y"}, {"d", "Y"}, {"e", "Y"}};
    const auto perfect = ngram::clustering_quality({{"a", 1}, {"b", 1}, {"c", 0}, {"d", 0}, {"e", 0}}, truth);
    CHECK(perfect.purity == 1.0);
    CHECK(perfect.adjusted_rand == doctest::Approx(1.0));
    const auto lumped = ngram::clustering_quality({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}, {"e", 0}}, truth);
    CHECK(lumped.purity == doctest::Approx(0.6));
    CHECK(lumped.adjusted_rand == doctest::Approx(0.0));

    // Random assignments of balanced labels average an ARI near zero.
    Xoshiro256 gen(RngStream{95, 0});
    std::map<std::string, std::string> balanced;
    for (int i = 0; i < 40; ++i) balanced["s" + std::to_string(i)] = i < 20 ? "X" : "Y";
    double sum = 0.0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        std::map<std::string, int> random;
        for (const auto& [id, _] : balanced) random[id] = static_cast<int>(gen.below(2));
        sum += ngram::clustering_quality(random, balanced).adjusted_rand;
    }
    CHECK(std::fabs(sum / reps) < 0.01);
}

TEST_CASE("two-style poem: split purity, boundary and sweep stability") {
    Xoshiro256 gen(RngStream{101, 0});
    const int switch_line = 1601;
    const Poem poem = synth::text_poem("two", 3200, synth::style_a(), synth::style_b(), switch_line, gen);
    const auto windows = rolling_windows(poem, 300, 100);
    const auto set = ngram::build_profiles(poem, windows, 3, 500);
    const auto tree = ngram::agglomerative_complete(ngram::cosine_distance_matrix(set));
    const auto split = ngram::top_two_assignment(tree);
    std::map<std::string, std::string> truth;
    for (const auto& w : windows) truth[w.id()] = w.majority_part();
    CHECK(ngram::clustering_quality(split, truth).purity >= 0.95);
    const auto boundary = ngram::split_boundary(windows, split);
    REQUIRE(boundary.has_value());
    CHECK(std::fabs(*boundary - (switch_line - 0.5)) <= 100.0);

    const auto sweep = ngram::robustness_sweep(poem, windows, {2, 3}, {100, 300}, {});
    CHECK(sweep.cells.size() == 4);
    CHECK(sweep.stability == 1.0);

    Xoshiro256 gen2(RngStream{102, 0});
    const Poem single = synth::text_poem("one", 3200, synth::style_mixed(), synth::style_mixed(), 0, gen2);
    const auto single_windows = rolling_windows(single, 300, 100);
    const auto unstable = ngram::robustness_sweep(single, single_windows, {2, 3, 4}, {100, 200, 300}, {});
    CHECK(unstable.stability < sweep.stability);
}

TEST_CASE("sweep cells that fail are recorded, not fatal") {
    Xoshiro256 gen(RngStream{103, 0});
    const Poem poem = synth::text_poem("p", 400, synth::style_a(), synth::style_b(), 201, gen);
    const auto windows = rolling_windows(poem, 100, 100);
    const auto sweep = ngram::robustness_sweep(poem, windows, {3, 9}, {50}, {});
    REQUIRE(sweep.cells.size() == 2);
    CHECK(sweep.cells[0].assignment.has_value());
    CHECK_FALSE(sweep.cells[1].assignment.has_value());
    CHECK_FALSE(sweep.cells[1].error.empty());
}

TEST_CASE("default sweep grid") {
    const auto k = ngram::default_sweep_k();
    CHECK(k.front() == 100);
    CHECK(k.back() == 1000);
    CHECK(k.size() == 19);
}
