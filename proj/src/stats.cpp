#include "oestylo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "oestylo/error.hpp"
#include "oestylo/special.hpp"

namespace oestylo::stats {

std::string to_string(Method m) {
    switch (m) {
        case Method::PooledT: return "pooled_t";
        case Method::Chi2Homogeneity: return "chi2_homogeneity";
        case Method::Chi2GoF: return "chi2_gof";
        case Method::Chi2Independence: return "chi2_independence";
        case Method::BootstrapEmpirical: return "bootstrap_empirical";
    }
    return "unknown";
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

LinearFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error("ols_fit: xs and ys differ in length");
    if (xs.size() < 2) throw Error("ols_fit: need at least two points");
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw Error("zero variance in predictor");
    LinearFit fit;
    fit.n = static_cast<int>(xs.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r = syy == 0.0 ? 0.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return fit;
}

double student_t_p(double t, double df) {
    if (!(df > 0.0)) throw Error("student_t_p: df must be positive");
    if (std::isnan(t)) throw Error("student_t_p: t is NaN");
    if (t == 0.0) return 1.0;
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return std::clamp(special::beta_i(df / 2.0, 0.5, x), 0.0, 1.0);
}

double chi_square_p(double x2, double df) {
    if (!(df > 0.0)) throw Error("chi_square_p: df must be positive");
    if (!(x2 >= 0.0)) throw Error("chi_square_p: statistic must be non-negative");
    return std::clamp(special::gamma_q(df / 2.0, x2 / 2.0), 0.0, 1.0);
}

TestResult pooled_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error("pooled_t_test: each sample needs at least two values");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a);
    const double mb = mean(b);
    double ss = 0.0;
    for (double x : a) ss += (x - ma) * (x - ma);
    for (double x : b) ss += (x - mb) * (x - mb);
    TestResult res;
    res.method = Method::PooledT;
    res.df = na + nb - 2.0;
    res.n_obs = static_cast<int>(a.size() + b.size());
    const double pooled_var = ss / res.df;
    if (pooled_var == 0.0) {
        if (ma != mb) throw Error("degenerate variance");
        res.statistic = 0.0;
        res.p_value = 1.0;
        return res;
    }
    res.statistic = (ma - mb) / std::sqrt(pooled_var * (1.0 / na + 1.0 / nb));
    res.p_value = student_t_p(res.statistic, res.df);
    return res;
}

namespace {

struct Chi2Core {
    double statistic = 0.0;
    int kept = 0;
    double min_expected = 0.0;
};

Chi2Core homogeneity_core(std::span<const int> a, std::span<const int> b, std::vector<int>* dropped) {
    double ra = 0.0, rb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        ra += a[j];
        rb += b[j];
    }
    const double n = ra + rb;
    Chi2Core core;
    core.min_expected = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double col = static_cast<double>(a[j]) + b[j];
        if (col == 0.0) {
            if (dropped) dropped->push_back(static_cast<int>(j));
            continue;
        }
        ++core.kept;
        const double ea = ra * col / n;
        const double eb = rb * col / n;
        core.min_expected = std::min({core.min_expected, ea, eb});
        core.statistic += (a[j] - ea) * (a[j] - ea) / ea + (b[j] - eb) * (b[j] - eb) / eb;
    }
    return core;
}

Chi2Core gof_core(std::span<const int> observed, std::span<const int> reference, std::vector<int>* dropped,
                  std::vector<int>* merged) {
    const std::size_t k = observed.size();
    double ref_total = 0.0;
    int first_nonzero = -1;
    for (std::size_t j = 0; j < k; ++j) {
        ref_total += reference[j];
        if (first_nonzero < 0 && reference[j] > 0) first_nonzero = static_cast<int>(j);
    }
    Chi2Core core;
    if (first_nonzero < 0) return core;
    // Observed counts after folding zero-reference categories into the first
    // category with a nonzero reference.
    std::vector<double> obs(observed.begin(), observed.end());
    for (std::size_t j = 0; j < k; ++j) {
        if (reference[j] != 0) continue;
        if (observed[j] != 0) {
            obs[static_cast<std::size_t>(first_nonzero)] += observed[j];
            if (merged) merged->push_back(static_cast<int>(j));
        } else if (dropped) {
            dropped->push_back(static_cast<int>(j));
        }
        obs[j] = 0.0;
    }
    double obs_total = 0.0;
    for (double o : observed) obs_total += o;
    core.min_expected = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
        if (reference[j] == 0) continue;
        ++core.kept;
        const double e = reference[j] / ref_total * obs_total;
        core.min_expected = std::min(core.min_expected, e);
        if (e > 0.0) core.statistic += (obs[j] - e) * (obs[j] - e) / e;
    }
    return core;
}

}  // namespace

TestResult chi2_homogeneity(std::span<const int> counts_a, std::span<const int> counts_b) {
    if (counts_a.size() != counts_b.size()) throw Error("chi2_homogeneity: category counts differ");
    if (counts_a.size() < 2) throw Error("chi2_homogeneity: need at least two categories");
    long ta = 0, tb = 0;
    for (std::size_t j = 0; j < counts_a.size(); ++j) {
        if (counts_a[j] < 0 || counts_b[j] < 0) throw Error("chi2_homogeneity: negative count");
        ta += counts_a[j];
        tb += counts_b[j];
    }
    if (ta == 0 || tb == 0) throw Error("chi2_homogeneity: both rows need a positive total");
    TestResult res;
    res.method = Method::Chi2Homogeneity;
    res.n_obs = static_cast<int>(ta + tb);
    const Chi2Core core = homogeneity_core(counts_a, counts_b, &res.dropped_categories);
    if (core.kept < 2) throw Error("chi2_homogeneity: fewer than two non-empty categories");
    res.statistic = core.statistic;
    res.df = core.kept - 1;
    res.min_expected = core.min_expected;
    res.p_value = chi_square_p(res.statistic, res.df);
    return res;
}

TestResult chi2_gof(std::span<const int> observed, std::span<const int> reference_counts) {
    if (observed.size() != reference_counts.size()) throw Error("chi2_gof: category counts differ");
    if (observed.size() < 2) throw Error("chi2_gof: need at least two categories");
    long to = 0, tr = 0;
    for (std::size_t j = 0; j < observed.size(); ++j) {
        if (observed[j] < 0 || reference_counts[j] < 0) throw Error("chi2_gof: negative count");
        to += observed[j];
        tr += reference_counts[j];
    }
    if (tr == 0) throw Error("chi2_gof: reference total must be positive");
    if (to == 0) throw Error("chi2_gof: observed total must be positive");
    TestResult res;
    res.method = Method::Chi2GoF;
    res.n_obs = static_cast<int>(to);
    const Chi2Core core = gof_core(observed, reference_counts, &res.dropped_categories, &res.merged_categories);
    if (core.kept < 2) throw Error("chi2_gof: fewer than two categories with nonzero reference");
    res.statistic = core.statistic;
    res.df = core.kept - 1;
    res.min_expected = core.min_expected;
    res.p_value = chi_square_p(res.statistic, res.df);
    return res;
}

TestResult chi2_independence(std::span<const int> table, int rows, int cols) {
    if (rows < 1 || cols < 1 || table.size() != static_cast<std::size_t>(rows) * cols) {
        throw Error("chi2_independence: table shape mismatch");
    }
    std::vector<double> rsum(rows, 0.0), csum(cols, 0.0);
    double n = 0.0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const int v = table[static_cast<std::size_t>(i) * cols + j];
            if (v < 0) throw Error("chi2_independence: negative count");
            rsum[i] += v;
            csum[j] += v;
            n += v;
        }
    }
    TestResult res;
    res.method = Method::Chi2Independence;
    res.n_obs = static_cast<int>(n);
    int kept_rows = 0, kept_cols = 0;
    for (int i = 0; i < rows; ++i) {
        if (rsum[i] > 0) ++kept_rows;
        else res.dropped_categories.push_back(i);
    }
    // Dropped columns are reported after the rows, offset by `rows`.
    for (int j = 0; j < cols; ++j) {
        if (csum[j] > 0) ++kept_cols;
        else res.dropped_categories.push_back(rows + j);
    }
    if (kept_rows < 2 || kept_cols < 2) throw Error("chi2_independence: need at least a 2x2 non-empty table");
    double stat = 0.0;
    double min_e = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
        if (rsum[i] == 0) continue;
        for (int j = 0; j < cols; ++j) {
            if (csum[j] == 0) continue;
            const double e = rsum[i] * csum[j] / n;
            const double o = table[static_cast<std::size_t>(i) * cols + j];
            min_e = std::min(min_e, e);
            stat += (o - e) * (o - e) / e;
        }
    }
    res.statistic = stat;
    res.df = static_cast<double>(kept_rows - 1) * (kept_cols - 1);
    res.min_expected = min_e;
    res.p_value = chi_square_p(stat, res.df);
    return res;
}

void for_each_chunk(int total, int chunk, unsigned threads, const std::function<void(int, int, int)>& fn) {
    if (total <= 0) return;
    const int chunks = (total + chunk - 1) / chunk;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(chunks));
    auto run = [&](int c) { fn(c, c * chunk, std::min(total, (c + 1) * chunk)); };
    if (threads <= 1) {
        for (int c = 0; c < chunks; ++c) run(c);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (int c = static_cast<int>(w); c < chunks; c += static_cast<int>(threads)) run(c);
        });
    }
    for (auto& t : workers) t.join();
}

double bootstrap_null_p(std::span<const int> pooled_items, int num_categories, int n_a, int n_b,
                        double observed_stat, StatKind kind, int B, const RngStream& rng) {
    if (B < 1000) throw Error("bootstrap_null_p: B must be at least 1000");
    if (n_a < 1 || n_b < 1) throw Error("bootstrap_null_p: group sizes must be positive");
    if (static_cast<std::size_t>(n_a) + n_b != pooled_items.size()) {
        throw Error("bootstrap_null_p: n_a + n_b must equal the pooled item count");
    }
    if (num_categories < 2) throw Error("bootstrap_null_p: need at least two categories");
    for (int item : pooled_items) {
        if (item < 0 || item >= num_categories) throw Error("bootstrap_null_p: category id out of range");
    }
    const double threshold = observed_stat - 1e-9 * std::max(1.0, std::fabs(observed_stat));
    const int chunks = (B + kMonteCarloChunk - 1) / kMonteCarloChunk;
    std::vector<int> exceed(static_cast<std::size_t>(chunks), 0);
    const auto n_items = static_cast<std::uint64_t>(pooled_items.size());
    for_each_chunk(B, kMonteCarloChunk, 0, [&](int c, int first, int last) {
        Xoshiro256 gen(rng.substream(static_cast<std::uint64_t>(c)));
        std::vector<int> ca(static_cast<std::size_t>(num_categories));
        std::vector<int> cb(static_cast<std::size_t>(num_categories));
        int hits = 0;
        for (int rep = first; rep < last; ++rep) {
            std::fill(ca.begin(), ca.end(), 0);
            std::fill(cb.begin(), cb.end(), 0);
            for (int i = 0; i < n_a; ++i) ++ca[static_cast<std::size_t>(pooled_items[gen.below(n_items)])];
            for (int i = 0; i < n_b; ++i) ++cb[static_cast<std::size_t>(pooled_items[gen.below(n_items)])];
            const Chi2Core core = kind == StatKind::Homogeneity ? homogeneity_core(ca, cb, nullptr)
                                                                 : gof_core(cb, ca, nullptr, nullptr);
            const double stat = core.kept < 2 ? 0.0 : core.statistic;
            if (stat >= threshold) ++hits;
        }
        exceed[static_cast<std::size_t>(c)] = hits;
    });
    long total = 0;
    for (int h : exceed) total += h;
    return (1.0 + static_cast<double>(total)) / (static_cast<double>(B) + 1.0);
}

}  // namespace oestylo::stats
