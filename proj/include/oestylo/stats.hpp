#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oestylo/rng.hpp"

namespace oestylo::stats {

enum class Method { PooledT, Chi2Homogeneity, Chi2GoF, Chi2Independence, BootstrapEmpirical };

std::string to_string(Method m);

// Outcome of every inferential routine in the toolkit.
struct TestResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    Method method = Method::PooledT;
    int n_obs = 0;

    // Chi-square diagnostics. Indices refer to the caller's category order.
    std::optional<double> min_expected;
    std::vector<int> dropped_categories;  // zero in every row/reference
    std::vector<int> merged_categories;   // GoF: zero reference, nonzero observed
    // Bootstrap only: number of replicates.
    int replicates = 0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    int n = 0;
};

LinearFit ols_fit(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> xs);

// Two-sided tail probability of Student's t.
double student_t_p(double t, double df);
// Upper-tail probability of the chi-square distribution.
double chi_square_p(double x2, double df);

// Pooled-variance two-sample t test, df = |a| + |b| - 2.
TestResult pooled_t_test(std::span<const double> a, std::span<const double> b);

TestResult chi2_homogeneity(std::span<const int> counts_a, std::span<const int> counts_b);
TestResult chi2_gof(std::span<const int> observed, std::span<const int> reference_counts);
// r x c contingency table, row-major. Empty rows and columns are dropped.
TestResult chi2_independence(std::span<const int> table, int rows, int cols);

enum class StatKind { Homogeneity, GoodnessOfFit };

// Empirical p of `observed_stat` under the single-source null: groups of
// sizes n_a and n_b are drawn with replacement from `pooled_items`
// (category ids in [0, num_categories)) and the statistic recomputed.
// p = (1 + #{resampled >= observed}) / (B + 1).
double bootstrap_null_p(std::span<const int> pooled_items, int num_categories, int n_a, int n_b,
                        double observed_stat, StatKind kind, int B, const RngStream& rng);

// Number of replicates per RNG substream in Monte Carlo loops.
inline constexpr int kMonteCarloChunk = 1024;

// Runs fn(chunk_index, first, last) over [0, total) split into fixed chunks,
// on up to `threads` workers (0 = hardware concurrency). Chunks are
// independent; callers store per-chunk results and reduce them in order.
void for_each_chunk(int total, int chunk, unsigned threads,
                    const std::function<void(int, int, int)>& fn);

}  // namespace oestylo::stats
