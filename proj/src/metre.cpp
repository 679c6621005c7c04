#include "oestylo/metre.hpp"

#include <algorithm>

#include "oestylo/error.hpp"

namespace oestylo::metre {

std::string to_string(Granularity g) { return g == Granularity::HalfLine ? "half" : "full"; }

std::string to_string(SplitTest t) { return t == SplitTest::Homogeneity ? "homogeneity" : "goodness_of_fit"; }

const std::vector<std::string>& labels(Granularity g) {
    static const std::vector<std::string> half = {"A", "B", "C", "D", "E"};
    static const std::vector<std::string> full = [] {
        std::vector<std::string> out;
        for (char a = 'A'; a <= 'E'; ++a) {
            for (char b = 'A'; b <= 'E'; ++b) out.push_back(std::string{a, b});
        }
        return out;
    }();
    return g == Granularity::HalfLine ? half : full;
}

int label_index(Granularity g, const std::string& label) {
    const auto& ls = labels(g);
    const auto it = std::find(ls.begin(), ls.end(), label);
    if (it == ls.end()) throw Error("unknown " + to_string(g) + "-line pattern '" + label + "'");
    return static_cast<int>(it - ls.begin());
}

int PatternCounts::total() const {
    int t = 0;
    for (int c : counts) t += c;
    return t;
}

namespace {

void require_scansion(const Poem& poem) {
    if (!poem.has_scansion) throw Error("poem unscanned: " + poem.id);
}

LineRange checked(const Poem& poem, LineRange range) {
    if (range.first < 1 || range.last > poem.line_count() || range.first > range.last) {
        throw Error("poem " + poem.id + ": invalid line range " + std::to_string(range.first) + "-" +
                    std::to_string(range.last));
    }
    return range;
}

void add_half_counts(const VerseLine& line, std::vector<int>& counts) {
    if (line.a_pattern) ++counts[static_cast<std::size_t>(scansion_index(*line.a_pattern))];
    if (line.b_pattern) ++counts[static_cast<std::size_t>(scansion_index(*line.b_pattern))];
}

int full_category(const VerseLine& line) {
    return scansion_index(*line.a_pattern) * kScansionTypes + scansion_index(*line.b_pattern);
}

}  // namespace

Pairing pair_full_lines(const Poem& poem, LineRange range) {
    require_scansion(poem);
    checked(poem, range);
    Pairing out;
    for (int i = range.first; i <= range.last; ++i) {
        const auto& line = poem.line(i);
        if (line.a_pattern && line.b_pattern) {
            out.patterns.push_back({i, full_category(line)});
            ++out.log.paired;
            continue;
        }
        if (!line.b_pattern) ++out.log.skipped_missing_b;
        else ++out.log.skipped_missing_a;
        if (line.a_pattern.has_value() != line.b_pattern.has_value()) ++out.log.misalignment_warnings;
    }
    return out;
}

PatternCounts pattern_counts(const Poem& poem, LineRange range, Granularity granularity) {
    require_scansion(poem);
    checked(poem, range);
    PatternCounts pc;
    pc.granularity = granularity;
    pc.labels = labels(granularity);
    pc.counts.assign(pc.labels.size(), 0);
    pc.section = range;
    if (granularity == Granularity::HalfLine) {
        for (int i = range.first; i <= range.last; ++i) add_half_counts(poem.line(i), pc.counts);
    } else {
        for (const auto& p : pair_full_lines(poem, range).patterns) ++pc.counts[static_cast<std::size_t>(p.category)];
    }
    return pc;
}

RollingSeries rolling_pattern_proportions(const Poem& poem, int width, int step, Granularity granularity) {
    require_scansion(poem);
    RollingSeries series;
    series.granularity = granularity;
    series.labels = labels(granularity);
    const std::size_t k = series.labels.size();
    // Prefix sums per label make each window O(k).
    const int n = poem.line_count();
    std::vector<std::vector<int>> prefix(static_cast<std::size_t>(n) + 1, std::vector<int>(k, 0));
    for (int i = 1; i <= n; ++i) {
        auto& row = prefix[static_cast<std::size_t>(i)];
        row = prefix[static_cast<std::size_t>(i - 1)];
        const auto& line = poem.line(i);
        if (granularity == Granularity::HalfLine) {
            add_half_counts(line, row);
        } else if (line.a_pattern && line.b_pattern) {
            ++row[static_cast<std::size_t>(full_category(line))];
        }
    }
    for (const auto& w : rolling_windows(poem, width, step)) {
        series.window_start.push_back(w.first_line);
        const auto& hi = prefix[static_cast<std::size_t>(w.last_line)];
        const auto& lo = prefix[static_cast<std::size_t>(w.first_line - 1)];
        std::vector<double> props(k);
        long total = 0;
        for (std::size_t j = 0; j < k; ++j) total += hi[j] - lo[j];
        if (total == 0) {
            series.proportions.emplace_back(std::nullopt);
            continue;
        }
        for (std::size_t j = 0; j < k; ++j) props[j] = static_cast<double>(hi[j] - lo[j]) / static_cast<double>(total);
        series.proportions.emplace_back(std::move(props));
    }
    return series;
}

stats::LinearFit cumulative_incidence_r(const Poem& poem, const std::string& pattern, Granularity granularity,
                                        std::optional<LineRange> range) {
    require_scansion(poem);
    const LineRange r = checked(poem, range.value_or(poem.full_range()));
    const int target = label_index(granularity, pattern);
    std::vector<double> xs, ys;
    auto hit = [&](double unit) {
        xs.push_back(unit);
        ys.push_back(static_cast<double>(xs.size()));
    };
    for (int i = r.first; i <= r.last; ++i) {
        const auto& line = poem.line(i);
        if (granularity == Granularity::HalfLine) {
            if (line.a_pattern && scansion_index(*line.a_pattern) == target) hit(2.0 * (i - 1) + 1.0);
            if (line.b_pattern && scansion_index(*line.b_pattern) == target) hit(2.0 * (i - 1) + 2.0);
        } else if (line.a_pattern && line.b_pattern && full_category(line) == target) {
            hit(static_cast<double>(i));
        }
    }
    if (xs.size() < 2) {
        throw Error("pattern " + pattern + " occurs fewer than two times in " + poem.id);
    }
    return stats::ols_fit(xs, ys);
}

const SplitTestRow& SplitTestTable::row(Granularity g, SplitTest t, bool bootstrap) const {
    for (const auto& r : rows) {
        if (r.granularity == g && r.test == t && r.bootstrap == bootstrap) return r;
    }
    throw Error("split test row not present");
}

SplitTestTable split_distribution_tests(const Poem& poem, int split_line, int B, const RngStream& rng) {
    require_scansion(poem);
    if (split_line < 1 || split_line >= poem.line_count()) {
        throw Error("split line " + std::to_string(split_line) + " is not strictly inside " + poem.id + " (1.." +
                    std::to_string(poem.line_count()) + ")");
    }
    SplitTestTable table;
    table.split_line = split_line;
    table.before = {1, split_line};
    table.after = {split_line + 1, poem.line_count()};

    for (Granularity g : {Granularity::HalfLine, Granularity::FullLine}) {
        const auto before = pattern_counts(poem, table.before, g);
        const auto after = pattern_counts(poem, table.after, g);
        const int k = static_cast<int>(before.labels.size());
        if (before.total() < k || after.total() < k) {
            throw Error("degenerate split at line " + std::to_string(split_line) + ": " + to_string(g) +
                        "-line sections hold " + std::to_string(before.total()) + " and " +
                        std::to_string(after.total()) + " scanned units, fewer than " + std::to_string(k) +
                        " categories");
        }
        table.rows.push_back({g, SplitTest::Homogeneity, false, stats::chi2_homogeneity(before.counts, after.counts)});
        table.rows.push_back({g, SplitTest::GoodnessOfFit, false, stats::chi2_gof(after.counts, before.counts)});
    }

    const auto pb = pair_full_lines(poem, table.before);
    const auto pa = pair_full_lines(poem, table.after);
    table.pairing_before = pb.log;
    table.pairing_after = pa.log;
    std::vector<int> pooled;
    pooled.reserve(pb.patterns.size() + pa.patterns.size());
    for (const auto& p : pb.patterns) pooled.push_back(p.category);
    for (const auto& p : pa.patterns) pooled.push_back(p.category);
    const int k = static_cast<int>(labels(Granularity::FullLine).size());
    const auto n_a = static_cast<int>(pb.patterns.size());
    const auto n_b = static_cast<int>(pa.patterns.size());

    for (SplitTest t : {SplitTest::Homogeneity, SplitTest::GoodnessOfFit}) {
        const auto& analytic = table.row(Granularity::FullLine, t, false).result;
        stats::TestResult boot = analytic;
        boot.method = stats::Method::BootstrapEmpirical;
        boot.replicates = B;
        boot.p_value = stats::bootstrap_null_p(
            pooled, k, n_a, n_b, analytic.statistic,
            t == SplitTest::Homogeneity ? stats::StatKind::Homogeneity : stats::StatKind::GoodnessOfFit, B,
            rng.substream(t == SplitTest::Homogeneity ? 1 : 2));
        table.rows.push_back({Granularity::FullLine, t, true, boot});
    }
    return table;
}

stats::TestResult halves_independence_test(const Poem& poem, std::optional<LineRange> range) {
    const LineRange r = range.value_or(poem.full_range());
    const auto pairing = pair_full_lines(poem, r);
    std::vector<int> table(static_cast<std::size_t>(kScansionTypes * kScansionTypes), 0);
    for (const auto& p : pairing.patterns) ++table[static_cast<std::size_t>(p.category)];
    return stats::chi2_independence(table, kScansionTypes, kScansionTypes);
}

}  // namespace oestylo::metre
