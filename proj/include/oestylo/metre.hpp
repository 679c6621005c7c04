#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oestylo/corpus.hpp"
#include "oestylo/rng.hpp"
#include "oestylo/stats.hpp"

namespace oestylo::metre {

enum class Granularity { HalfLine, FullLine };

std::string to_string(Granularity g);
// "A".."E" or "AA".."EE" in lexicographic order.
const std::vector<std::string>& labels(Granularity g);
int label_index(Granularity g, const std::string& label);

// Named split points: the conventional divide and the scribal hand change.
inline constexpr int kDefaultSplitLine = 2300;
inline constexpr int kScribalHandSplitLine = 1939;

struct PatternCounts {
    Granularity granularity = Granularity::HalfLine;
    std::vector<std::string> labels;
    std::vector<int> counts;
    LineRange section;

    int total() const;
};

struct PairingLog {
    int paired = 0;
    int skipped_missing_a = 0;
    int skipped_missing_b = 0;   // includes lines missing both halves
    // Lines with exactly one half present. A sequential pairer over the
    // half-line stream goes out of alignment at each of these.
    int misalignment_warnings = 0;
};

struct FullLinePattern {
    int line = 0;
    int category = 0;  // index into labels(FullLine)
};

struct Pairing {
    std::vector<FullLinePattern> patterns;
    PairingLog log;
};

Pairing pair_full_lines(const Poem& poem, LineRange range);

PatternCounts pattern_counts(const Poem& poem, LineRange range, Granularity granularity);

struct RollingSeries {
    Granularity granularity = Granularity::HalfLine;
    std::vector<std::string> labels;
    std::vector<int> window_start;
    // One proportion vector per window; absent when the window has no
    // scanned units.
    std::vector<std::optional<std::vector<double>>> proportions;
};

RollingSeries rolling_pattern_proportions(const Poem& poem, int width, int step, Granularity granularity);

// Original "ordinal index" metric: x = unit index of the n-th occurrence of
// `pattern`, y = n. Half-line unit index is 2*(line-1)+1 for a-verses and
// 2*(line-1)+2 for b-verses; full-line unit index is the line number.
stats::LinearFit cumulative_incidence_r(const Poem& poem, const std::string& pattern, Granularity granularity,
                                        std::optional<LineRange> range = std::nullopt);

enum class SplitTest { Homogeneity, GoodnessOfFit };
std::string to_string(SplitTest t);

struct SplitTestRow {
    Granularity granularity;
    SplitTest test;
    bool bootstrap = false;
    stats::TestResult result;
};

struct SplitTestTable {
    int split_line = 0;
    LineRange before;
    LineRange after;
    std::vector<SplitTestRow> rows;  // half hom, half gof, full hom, full gof, full hom boot, full gof boot
    PairingLog pairing_before;
    PairingLog pairing_after;

    const SplitTestRow& row(Granularity g, SplitTest t, bool bootstrap) const;
};

// Before = lines 1..split_line, after = split_line+1..end. GoF uses the
// before-section as reference. Bootstrap rows resample full-line patterns
// (B replicates, substreams 1 and 2 of `rng`).
SplitTestTable split_distribution_tests(const Poem& poem, int split_line, int B, const RngStream& rng);

// Chi-square test of independence between a-verse and b-verse types over
// lines with both halves scanned.
stats::TestResult halves_independence_test(const Poem& poem, std::optional<LineRange> range = std::nullopt);

}  // namespace oestylo::metre
