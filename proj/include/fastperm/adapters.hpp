#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fastperm/estimators.hpp"
#include "fastperm/rng.hpp"
#include "fastperm/sample_vector.hpp"

namespace fastperm {

enum class TestKind { pearson, spearman, mann_whitney, kruskal_wallis };

/// "pearson", "spearman", "mann-whitney", "kruskal-wallis".
std::string_view to_string(TestKind k);
/// Accepts hyphen or underscore spellings.
std::optional<TestKind> parse_test_kind(std::string_view name);

/// A one-sided test recast as Prob(sigma u . v >= t).
struct TestReduction {
    SampleVector u;
    SampleVector v;
    double t = 0.0;
    bool tie_flag = false;
    TestKind test = TestKind::pearson;
    std::vector<std::string> warnings;
};

/// u = x, v = y, t = x . y. The correlation's normalization and centering
/// are invariant under permutation, so the raw product ranks permutations
/// identically. Requires n >= 3 and non-constant x and y.
TestReduction pearson_reduction(const SampleVector& x, const SampleVector& y);

/// Pearson on midranks; tie_flag reports ties in either input.
TestReduction spearman_reduction(const SampleVector& x, const SampleVector& y);

/// v = midranks of xs ++ ys, u = |xs| zeros then |ys| ones, t = u . v.
/// Large values in ys give small p-values.
TestReduction mann_whitney_reduction(std::span<const double> xs, std::span<const double> ys);

/// Observations stored group after group.
struct GroupedSample {
    std::vector<double> values;
    std::vector<std::size_t> group_sizes;

    /// Throws unless there are >= 2 nonempty groups covering all values.
    void validate() const;
    std::size_t total() const noexcept { return values.size(); }
};

/// Ingredients of the Kruskal-Wallis statistic for a grouped sample.
struct KruskalWallisSetup {
    std::vector<double> ranks;  // midranks of all observations, in input order
    std::vector<std::size_t> group_sizes;
    double tie_correction = 1.0;  // 1 - sum(t^3 - t) / (N^3 - N)
    double observed_h = 0.0;
    bool tie_flag = false;
    bool degenerate = false;  // all observations equal, or every group a singleton
    std::vector<std::string> warnings;
};

KruskalWallisSetup kruskal_wallis_setup(const GroupedSample& g);

/// H = (12 / (N (N + 1)) sum_i R_i^2 / n_i - 3 (N + 1)) / tie_correction.
double kruskal_wallis_h(std::span<const double> rank_sums, std::span<const std::size_t> sizes,
                        double tie_correction);

/// FFT batches: per batch one (sigma1, sigma2) pair and one correlation per
/// group, giving all n shifted rank-sum vectors at once.
PValueEstimate kruskal_wallis_pvalue(const GroupedSample& g, const AccuracySpec& acc, const RngStream& rng,
                                     const EstimatorOptions& opts = {});
PValueEstimate kruskal_wallis_pvalue_median(const GroupedSample& g, const AccuracySpec& acc,
                                            const RngStream& rng, unsigned repeats,
                                            const EstimatorOptions& opts = {});
PValueEstimate kruskal_wallis_conservative(const GroupedSample& g, std::uint64_t i_max, const RngStream& rng,
                                           const EstimatorOptions& opts = {});
PValueEstimate kruskal_wallis_naive(const GroupedSample& g, std::uint64_t m, const RngStream& rng);
PValueEstimate kruskal_wallis_exact(const GroupedSample& g, std::size_t exact_limit = 10);

}  // namespace fastperm
