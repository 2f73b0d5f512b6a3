#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "fastperm/rng.hpp"
#include "fastperm/sample_vector.hpp"

namespace fastperm {

enum class Method { fft, fft_median, naive, exact, conservative };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Target accuracy: |estimate - p| <= epsilon * sqrt(p) except with
/// probability delta. variance_constant is the C in the batch count.
struct AccuracySpec {
    double epsilon = 0.05;
    double delta = 0.05;
    double variance_constant = 2.0;

    /// Throws std::invalid_argument unless epsilon > 0, 0 < delta < 1, C > 0.
    void validate() const;
    /// ceil(C / (delta * n * epsilon^2)), at least 1.
    std::uint64_t batch_count(std::size_t n) const;
};

struct EstimatorOptions {
    unsigned threads = 1;
    std::uint64_t max_batches = 100'000'000;
    std::size_t exact_limit = 10;
};

struct PValueEstimate {
    double estimate = 0.0;
    std::uint64_t batches = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double empirical_batch_variance = 0.0;
    Method method = Method::fft;
    std::uint64_t near_threshold_count = 0;
};

/// Repeated-batch FFT estimator of Prob(sigma u . v >= t).
///
/// Runs B = acc.batch_count(n) batches; batch i uses rng.child(i), so the
/// result is independent of opts.threads. Throws CapExceededError when B
/// exceeds opts.max_batches.
PValueEstimate estimate_pvalue(const SampleVector& u, const SampleVector& v, double t, const AccuracySpec& acc,
                               const RngStream& rng, const EstimatorOptions& opts = {});

/// Median of `repeats` (odd) runs of estimate_pvalue at failure probability
/// 1/4. Repeat 0 runs on `rng` itself, repeat r > 0 on a derived stream.
PValueEstimate estimate_pvalue_median(const SampleVector& u, const SampleVector& v, double t,
                                      const AccuracySpec& acc, const RngStream& rng, unsigned repeats,
                                      const EstimatorOptions& opts = {});

/// Smallest odd r with exp(-r/8) <= delta (Hoeffding bound for a median of
/// runs that each fail with probability at most 1/4).
unsigned median_repeats_for(double delta);

/// Picks the linear or median plan for `acc`, whichever needs fewer batches
/// in total, and runs it. Used by front ends that only know (epsilon, delta).
PValueEstimate estimate_pvalue_auto(const SampleVector& u, const SampleVector& v, double t,
                                    const AccuracySpec& acc, const RngStream& rng,
                                    const EstimatorOptions& opts = {});

/// Conservative p-value for t = u . v. The first sample group comes from the
/// powers of a uniformly random conjugate of the long cycle (stream
/// rng.child(0)); groups 1..i_max are ordinary batches on rng.child(i).
/// The estimate is a multiple of 1 / (n (i_max + 1)) and at least that value.
PValueEstimate conservative_pvalue(const SampleVector& u, const SampleVector& v, std::uint64_t i_max,
                                   const RngStream& rng, const EstimatorOptions& opts = {});

/// Plain Monte Carlo: m independent uniform permutations, direct dot products.
PValueEstimate naive_mc_pvalue(const SampleVector& u, const SampleVector& v, double t, std::uint64_t m,
                               const RngStream& rng);

/// Full enumeration of S_n. Refuses n > exact_limit.
PValueEstimate exact_pvalue(const SampleVector& u, const SampleVector& v, double t,
                            std::size_t exact_limit = 10);

struct CovarianceProbeOptions {
    /// Reference p from exact enumeration up to this n, naive sampling above.
    std::size_t exact_limit = 8;
    std::uint64_t reference_samples = 200'000;
    unsigned threads = 1;
};

/// Empirical check of the shift-sample covariance structure of single batches.
struct CovarianceReport {
    std::size_t n = 0;
    double t = 0.0;
    std::uint64_t trials = 0;
    double p_reference = 0.0;
    double p_reference_std_error = 0.0;
    bool p_reference_exact = false;
    double mean_batch = 0.0;
    /// Sample variance of the batch means x_i.
    double batch_variance = 0.0;
    /// n Var(x_i) / (p (1 - p)); 1 for independent shifts, 0 if Var(x_i) = 0.
    double variance_ratio = 0.0;
    /// Cov(z_j, z_k) averaged over ordered pairs j != k, with its standard error.
    double mean_pairwise_covariance = 0.0;
    double covariance_std_error = 0.0;
};

CovarianceReport empirical_covariance_probe(const SampleVector& u, const SampleVector& v, double t,
                                            std::uint64_t trials, const RngStream& rng,
                                            const CovarianceProbeOptions& opts = {});

}  // namespace fastperm
