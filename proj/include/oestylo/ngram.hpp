#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oestylo/corpus.hpp"

namespace oestylo::ngram {

// Lowercases, drops punctuation (sense-pause glyphs, commas, quotes,
// editorial dots) and collapses whitespace, including the half-line TAB,
// to a single space. Leading and trailing spaces are trimmed.
std::u32string normalize(std::string_view text);

struct LabeledText {
    std::string id;
    std::u32string text;  // already normalized
};

// Normalized text of a window: its lines joined by single spaces.
LabeledText window_text(const Poem& poem, const SampleWindow& window);

struct ProfileOptions {
    // Standardize each feature across samples (Burrows-Delta style) before
    // distances are taken. Off by default.
    bool zscore = false;
};

struct NgramProfile {
    std::string sample;
    std::vector<double> values;  // aligned with ProfileSet::features
};

struct ProfileSet {
    int n = 0;
    std::vector<std::string> features;  // global top-k, UTF-8
    std::vector<NgramProfile> profiles;
};

ProfileSet build_profiles(const std::vector<LabeledText>& samples, int n, int k, const ProfileOptions& opts = {});
ProfileSet build_profiles(const Poem& poem, const std::vector<SampleWindow>& windows, int n, int k,
                          const ProfileOptions& opts = {});

struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<double> values;  // row-major

    std::size_t size() const { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * ids.size() + j]; }
};

DistanceMatrix cosine_distance_matrix(const ProfileSet& profiles);

struct Merge {
    int node_a = 0;  // smaller cluster id
    int node_b = 0;
    double height = 0.0;
    int size = 0;  // leaves under the new node
};

// Leaves are nodes 0..n-1 in the matrix order; the i-th merge creates node n+i.
struct Dendrogram {
    std::vector<std::string> leaves;
    std::vector<Merge> merges;

    // Leaf indices under a node.
    std::vector<int> members(int node) const;
};

Dendrogram agglomerative_complete(const DistanceMatrix& dist);

// Cluster 0 is the side of the final merge holding the lexicographically
// smallest sample id.
std::map<std::string, int> top_two_assignment(const Dendrogram& tree);

struct ClusteringQuality {
    double purity = 0.0;
    double adjusted_rand = 0.0;
};

ClusteringQuality clustering_quality(const std::map<std::string, int>& assignment,
                                     const std::map<std::string, std::string>& truth);

struct SweepCell {
    int n = 0;
    int k = 0;
    std::optional<std::map<std::string, int>> assignment;
    std::string error;  // set when the cell failed
};

struct SweepResult {
    std::vector<std::string> samples;
    std::vector<SweepCell> cells;
    // Fraction of valid cells whose split equals the most common split.
    double stability = 0.0;
    std::optional<std::map<std::string, int>> majority_split;
};

std::vector<int> default_sweep_k();

SweepResult robustness_sweep(const Poem& target, const std::vector<SampleWindow>& windows,
                             const std::vector<int>& n_values, const std::vector<int>& k_values,
                             const ProfileOptions& opts = {});

// Change point of a top-two split over windows ordered by start line: the
// midpoint between the centres of the last window before and the first
// window after the best single change. Absent when fewer than two windows.
std::optional<double> split_boundary(const std::vector<SampleWindow>& windows,
                                     const std::map<std::string, int>& assignment);

}  // namespace oestylo::ngram
