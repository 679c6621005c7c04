#include "oestylo/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

#include "oestylo/error.hpp"
#include "oestylo/utf8.hpp"

namespace oestylo::ngram {

namespace {

bool is_dropped(char32_t cp) {
    if (cp < 0x80) {
        const bool alnum = (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9');
        return !alnum && cp > 0x20;
    }
    return (cp >= 0x2010 && cp <= 0x206F) || cp == 0xAB || cp == 0xBB || cp == 0xA1 || cp == 0xBF || cp == 0xB7;
}

}  // namespace

std::u32string normalize(std::string_view text) {
    std::u32string out;
    bool pending_space = false;
    for (const auto& c : utf8::decode(text)) {
        const char32_t cp = c.value;
        if (utf8::is_space(cp)) {
            pending_space = true;
            continue;
        }
        if (is_dropped(cp) || cp < 0x20) continue;
        if (pending_space && !out.empty()) out.push_back(U' ');
        pending_space = false;
        out.push_back(utf8::to_lower(cp));
    }
    return out;
}

LabeledText window_text(const Poem& poem, const SampleWindow& window) {
    std::string raw;
    for (const VerseLine* line : window_lines(poem, window)) {
        raw += line->a_text;
        raw += '\t';
        raw += line->b_text;
        raw += '\n';
    }
    return {window.id(), normalize(raw)};
}

namespace {

struct GramCounts {
    int n = 0;
    std::vector<std::unordered_map<std::u32string, int>> per_sample;
    std::vector<long> totals;
    std::vector<std::pair<std::string, long>> ranked;  // (utf8 gram, total count), by count desc then gram
};

GramCounts count_grams(const std::vector<LabeledText>& samples, int n) {
    if (n < 2 || n > 5) throw Error("n-gram length must be in [2, 5]");
    GramCounts gc;
    gc.n = n;
    std::unordered_map<std::u32string, long> global;
    for (const auto& s : samples) {
        if (s.text.size() < static_cast<std::size_t>(n)) {
            throw Error("sample " + s.id + " is shorter than n = " + std::to_string(n) + " after normalization");
        }
        std::unordered_map<std::u32string, int> counts;
        const std::size_t grams = s.text.size() - static_cast<std::size_t>(n) + 1;
        for (std::size_t i = 0; i < grams; ++i) ++counts[s.text.substr(i, static_cast<std::size_t>(n))];
        for (const auto& [g, c] : counts) global[g] += c;
        gc.per_sample.push_back(std::move(counts));
        gc.totals.push_back(static_cast<long>(grams));
    }
    gc.ranked.reserve(global.size());
    for (const auto& [g, c] : global) gc.ranked.emplace_back(utf8::from_u32(g), c);
    std::sort(gc.ranked.begin(), gc.ranked.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    return gc;
}

ProfileSet select_features(const std::vector<LabeledText>& samples, const GramCounts& gc, int k,
                           const ProfileOptions& opts) {
    if (k < 1) throw Error("k must be >= 1");
    ProfileSet set;
    set.n = gc.n;
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), gc.ranked.size());
    std::vector<std::u32string> keys;
    for (std::size_t f = 0; f < kk; ++f) {
        set.features.push_back(gc.ranked[f].first);
        keys.push_back(utf8::to_u32(gc.ranked[f].first));
    }
    for (std::size_t s = 0; s < samples.size(); ++s) {
        NgramProfile p;
        p.sample = samples[s].id;
        p.values.reserve(kk);
        for (const auto& key : keys) {
            const auto it = gc.per_sample[s].find(key);
            const int c = it == gc.per_sample[s].end() ? 0 : it->second;
            p.values.push_back(static_cast<double>(c) / static_cast<double>(gc.totals[s]));
        }
        set.profiles.push_back(std::move(p));
    }
    if (opts.zscore && set.profiles.size() > 1) {
        const double m = static_cast<double>(set.profiles.size());
        for (std::size_t f = 0; f < kk; ++f) {
            double mu = 0.0;
            for (const auto& p : set.profiles) mu += p.values[f];
            mu /= m;
            double ss = 0.0;
            for (const auto& p : set.profiles) ss += (p.values[f] - mu) * (p.values[f] - mu);
            const double sd = std::sqrt(ss / (m - 1.0));
            for (auto& p : set.profiles) p.values[f] = sd > 0.0 ? (p.values[f] - mu) / sd : 0.0;
        }
    }
    return set;
}

}  // namespace

ProfileSet build_profiles(const std::vector<LabeledText>& samples, int n, int k, const ProfileOptions& opts) {
    if (samples.empty()) throw Error("build_profiles: no samples");
    return select_features(samples, count_grams(samples, n), k, opts);
}

ProfileSet build_profiles(const Poem& poem, const std::vector<SampleWindow>& windows, int n, int k,
                          const ProfileOptions& opts) {
    std::vector<LabeledText> texts;
    for (const auto& w : windows) texts.push_back(window_text(poem, w));
    return build_profiles(texts, n, k, opts);
}

DistanceMatrix cosine_distance_matrix(const ProfileSet& profiles) {
    const std::size_t m = profiles.profiles.size();
    if (m < 2) throw Error("cosine_distance_matrix: need at least two profiles");
    DistanceMatrix d;
    d.values.assign(m * m, 0.0);
    std::vector<double> norms(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = profiles.profiles[i];
        d.ids.push_back(p.sample);
        double ss = 0.0;
        for (double v : p.values) ss += v * v;
        if (ss == 0.0) throw Error("sample " + p.sample + " has a zero profile vector");
        norms[i] = std::sqrt(ss);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& a = profiles.profiles[i].values;
            const auto& b = profiles.profiles[j].values;
            double dot = 0.0;
            for (std::size_t f = 0; f < a.size(); ++f) dot += a[f] * b[f];
            const double dist = std::clamp(1.0 - dot / (norms[i] * norms[j]), 0.0, 2.0);
            d.at(i, j) = dist;
            d.at(j, i) = dist;
        }
    }
    return d;
}

std::vector<int> Dendrogram::members(int node) const {
    const int n = static_cast<int>(leaves.size());
    std::vector<int> out;
    std::vector<int> stack{node};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v < n) {
            out.push_back(v);
            continue;
        }
        const auto& m = merges.at(static_cast<std::size_t>(v - n));
        stack.push_back(m.node_b);
        stack.push_back(m.node_a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Dendrogram agglomerative_complete(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    if (n < 1 || dist.values.size() != n * n) throw Error("agglomerative_complete: malformed distance matrix");
    Dendrogram tree;
    tree.leaves = dist.ids;
    std::vector<double> d = dist.values;
    std::vector<int> cluster_id(n);
    std::vector<int> cluster_size(n, 1);
    std::vector<bool> active(n, true);
    for (std::size_t i = 0; i < n; ++i) cluster_id[i] = static_cast<int>(i);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        std::pair<int, int> best_key{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                const double v = d[i * n + j];
                const std::pair<int, int> key = std::minmax(cluster_id[i], cluster_id[j]);
                if (v < best || (v == best && key < best_key)) {
                    best = v;
                    best_key = key;
                    bi = i;
                    bj = j;
                }
            }
        }
        const int new_id = static_cast<int>(n + step);
        tree.merges.push_back({best_key.first, best_key.second, best, cluster_size[bi] + cluster_size[bj]});
        for (std::size_t o = 0; o < n; ++o) {
            if (!active[o] || o == bi || o == bj) continue;
            const double v = std::max(d[bi * n + o], d[bj * n + o]);
            d[bi * n + o] = v;
            d[o * n + bi] = v;
        }
        active[bj] = false;
        cluster_id[bi] = new_id;
        cluster_size[bi] += cluster_size[bj];
    }
    return tree;
}

std::map<std::string, int> top_two_assignment(const Dendrogram& tree) {
    if (tree.leaves.size() < 2 || tree.merges.empty()) throw Error("top_two_assignment: need at least two leaves");
    const auto& last = tree.merges.back();
    const auto left = tree.members(last.node_a);
    const auto right = tree.members(last.node_b);
    auto smallest = [&](const std::vector<int>& ms) {
        std::string best = tree.leaves[static_cast<std::size_t>(ms.front())];
        for (int m : ms) best = std::min(best, tree.leaves[static_cast<std::size_t>(m)]);
        return best;
    };
    const bool left_first = smallest(left) < smallest(right);
    std::map<std::string, int> out;
    for (int m : left) out[tree.leaves[static_cast<std::size_t>(m)]] = left_first ? 0 : 1;
    for (int m : right) out[tree.leaves[static_cast<std::size_t>(m)]] = left_first ? 1 : 0;
    return out;
}

ClusteringQuality clustering_quality(const std::map<std::string, int>& assignment,
                                     const std::map<std::string, std::string>& truth) {
    if (assignment.size() != truth.size()) throw Error("clustering_quality: assignment and truth differ in size");
    if (assignment.empty()) throw Error("clustering_quality: no samples");
    std::map<int, std::map<std::string, long>> table;
    std::map<int, long> cluster_sizes;
    std::map<std::string, long> label_sizes;
    for (const auto& [id, cluster] : assignment) {
        const auto it = truth.find(id);
        if (it == truth.end()) throw Error("clustering_quality: sample " + id + " has no truth label");
        ++table[cluster][it->second];
        ++cluster_sizes[cluster];
        ++label_sizes[it->second];
    }
    const double n = static_cast<double>(assignment.size());
    ClusteringQuality q;
    long majority_sum = 0;
    for (const auto& [cluster, labels] : table) {
        long best = 0;
        for (const auto& [label, c] : labels) best = std::max(best, c);
        majority_sum += best;
    }
    q.purity = static_cast<double>(majority_sum) / n;

    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [cluster, labels] : table) {
        for (const auto& [label, c] : labels) index += choose2(static_cast<double>(c));
    }
    for (const auto& [c, s] : cluster_sizes) sum_a += choose2(static_cast<double>(s));
    for (const auto& [l, s] : label_sizes) sum_b += choose2(static_cast<double>(s));
    const double total = choose2(n);
    const double expected = total > 0 ? sum_a * sum_b / total : 0.0;
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom = max_index - expected;
    if (denom == 0.0) {
        // Both partitions trivial (one block or all singletons).
        q.adjusted_rand = sum_a == sum_b ? 1.0 : 0.0;
    } else {
        q.adjusted_rand = (index - expected) / denom;
    }
    return q;
}

std::vector<int> default_sweep_k() {
    std::vector<int> ks;
    for (int k = 100; k <= 1000; k += 50) ks.push_back(k);
    return ks;
}

SweepResult robustness_sweep(const Poem& target, const std::vector<SampleWindow>& windows,
                             const std::vector<int>& n_values, const std::vector<int>& k_values,
                             const ProfileOptions& opts) {
    SweepResult out;
    std::vector<LabeledText> texts;
    for (const auto& w : windows) {
        if (w.source != target.id) continue;
        texts.push_back(window_text(target, w));
        out.samples.push_back(texts.back().id);
    }
    std::vector<std::pair<std::map<std::string, int>, int>> tally;
    int valid = 0;
    for (int n : n_values) {
        std::optional<GramCounts> counts;
        std::string count_error;
        try {
            counts = count_grams(texts, n);
        } catch (const Error& e) {
            count_error = e.what();
        }
        for (int k : k_values) {
            SweepCell cell;
            cell.n = n;
            cell.k = k;
            try {
                if (!counts) throw Error(count_error);
                if (texts.size() < 2) throw Error("fewer than two windows");
                const auto profiles = select_features(texts, *counts, k, opts);
                const auto tree = agglomerative_complete(cosine_distance_matrix(profiles));
                cell.assignment = top_two_assignment(tree);
            } catch (const Error& e) {
                cell.error = e.what();
            }
            if (cell.assignment) {
                ++valid;
                auto it = std::find_if(tally.begin(), tally.end(),
                                       [&](const auto& t) { return t.first == *cell.assignment; });
                if (it == tally.end()) tally.emplace_back(*cell.assignment, 1);
                else ++it->second;
            }
            out.cells.push_back(std::move(cell));
        }
    }
    if (valid > 0) {
        const auto best = std::max_element(tally.begin(), tally.end(),
                                           [](const auto& x, const auto& y) { return x.second < y.second; });
        out.majority_split = best->first;
        out.stability = static_cast<double>(best->second) / valid;
    }
    return out;
}

std::optional<double> split_boundary(const std::vector<SampleWindow>& windows,
                                     const std::map<std::string, int>& assignment) {
    std::vector<const SampleWindow*> ordered;
    for (const auto& w : windows) {
        if (assignment.count(w.id())) ordered.push_back(&w);
    }
    if (ordered.size() < 2) return std::nullopt;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const SampleWindow* a, const SampleWindow* b) { return a->lines.front() < b->lines.front(); });
    const std::size_t m = ordered.size();
    std::size_t best_c = 1;
    std::size_t best_err = std::numeric_limits<std::size_t>::max();
    for (std::size_t c = 1; c < m; ++c) {
        for (int first_label = 0; first_label < 2; ++first_label) {
            std::size_t err = 0;
            for (std::size_t i = 0; i < m; ++i) {
                const int want = i < c ? first_label : 1 - first_label;
                err += assignment.at(ordered[i]->id()) != want ? 1 : 0;
            }
            if (err < best_err) {
                best_err = err;
                best_c = c;
            }
        }
    }
    auto centre = [](const SampleWindow* w) { return 0.5 * (w->lines.front() + w->lines.back()); };
    return 0.5 * (centre(ordered[best_c - 1]) + centre(ordered[best_c]));
}

}  // namespace oestylo::ngram
