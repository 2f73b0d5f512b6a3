#include "fastperm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastperm/dot.hpp"
#include "fastperm/error.hpp"
#include "fastperm/parallel.hpp"
#include "fastperm/permutation.hpp"
#include "fastperm/sampler.hpp"

namespace fastperm {

namespace {

// Stream-id domains for derived streams that must not meet batch indices.
constexpr std::uint64_t kRepeatDomain = 0x4d45'4449'0000'0000ULL;
constexpr std::uint64_t kReferenceDomain = 0x5245'4645'0000'0000ULL;

void check_inputs(const SampleVector& u, const SampleVector& v, double t, const char* what) {
    require_same_length(u.size(), v.size(), what);
    if (!std::isfinite(t)) throw NonFiniteError(std::string(what) + ": threshold must be finite");
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Ordered two-pass mean and sample variance.
Moments moments(const std::vector<double>& x) {
    Moments m;
    if (x.empty()) return m;
    m.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    if (x.size() < 2) return m;
    double ss = 0.0;
    for (double xi : x) ss += (xi - m.mean) * (xi - m.mean);
    m.variance = ss / static_cast<double>(x.size() - 1);
    return m;
}

struct BatchRun {
    std::vector<std::size_t> hits;
    std::uint64_t near = 0;
};

// Runs batches first..first+count-1 on streams rng.child(first + i).
BatchRun run_batches(const SampleVector& u, const SampleVector& v, double t, const RngStream& rng,
                     std::uint64_t first, std::uint64_t count, unsigned threads) {
    BatchRun out;
    out.hits.resize(count);
    std::vector<std::size_t> near(count, 0);
    detail::parallel_indexed(
        count, threads, [&] { return BatchSampler(u.values(), v.values()); },
        [&](BatchSampler& sampler, std::uint64_t i) {
            const BatchResult r = sampler.run(t, rng.child(first + i));
            out.hits[i] = r.hits;
            near[i] = r.near_threshold_count;
        });
    out.near = std::accumulate(near.begin(), near.end(), std::uint64_t{0});
    return out;
}

std::uint64_t checked_batches(const AccuracySpec& acc, std::size_t n, const EstimatorOptions& opts) {
    acc.validate();
    const std::uint64_t b = acc.batch_count(n);
    if (b > opts.max_batches) {
        throw CapExceededError("batch count " + std::to_string(b) + " exceeds the configured maximum " +
                               std::to_string(opts.max_batches));
    }
    return b;
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::fft: return "fft";
        case Method::fft_median: return "fft-median";
        case Method::naive: return "naive";
        case Method::exact: return "exact";
        case Method::conservative: return "conservative";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::fft, Method::fft_median, Method::naive, Method::exact, Method::conservative}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

void AccuracySpec::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(variance_constant > 0.0) || !std::isfinite(variance_constant)) {
        throw std::invalid_argument("variance constant C must be positive");
    }
}

std::uint64_t AccuracySpec::batch_count(std::size_t n) const {
    const double b = std::ceil(variance_constant / (delta * static_cast<double>(n) * epsilon * epsilon));
    if (!(b < 1.8e19)) return UINT64_MAX;
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(b));
}

PValueEstimate estimate_pvalue(const SampleVector& u, const SampleVector& v, double t, const AccuracySpec& acc,
                               const RngStream& rng, const EstimatorOptions& opts) {
    check_inputs(u, v, t, "estimate_pvalue");
    const std::size_t n = u.size();
    const std::uint64_t batches = checked_batches(acc, n, opts);
    const BatchRun run = run_batches(u, v, t, rng, 0, batches, opts.threads);

    std::vector<double> x(batches);
    for (std::uint64_t i = 0; i < batches; ++i) x[i] = static_cast<double>(run.hits[i]) / static_cast<double>(n);
    const Moments m = moments(x);

    PValueEstimate e;
    e.estimate = std::clamp(m.mean, 0.0, 1.0);
    e.batches = batches;
    e.n = n;
    e.seed = rng.seed();
    e.empirical_batch_variance = m.variance;
    e.method = Method::fft;
    e.near_threshold_count = run.near;
    return e;
}

unsigned median_repeats_for(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    auto r = static_cast<unsigned>(std::ceil(8.0 * std::log(1.0 / delta)));
    r = std::max(r, 1u);
    return (r % 2 == 0) ? r + 1 : r;
}

PValueEstimate estimate_pvalue_median(const SampleVector& u, const SampleVector& v, double t,
                                      const AccuracySpec& acc, const RngStream& rng, unsigned repeats,
                                      const EstimatorOptions& opts) {
    if (repeats == 0 || repeats % 2 == 0) {
        throw std::invalid_argument("median trick needs an odd positive repeat count");
    }
    AccuracySpec inner = acc;
    inner.delta = 0.25;

    std::vector<PValueEstimate> runs;
    runs.reserve(repeats);
    for (unsigned r = 0; r < repeats; ++r) {
        const RngStream stream = (r == 0) ? rng : rng.child(kRepeatDomain + r);
        runs.push_back(estimate_pvalue(u, v, t, inner, stream, opts));
    }

    std::vector<double> values;
    PValueEstimate e;
    for (const auto& run : runs) {
        values.push_back(run.estimate);
        e.batches += run.batches;
        e.empirical_batch_variance += run.empirical_batch_variance;
        e.near_threshold_count += run.near_threshold_count;
    }
    std::nth_element(values.begin(), values.begin() + repeats / 2, values.end());
    e.estimate = values[repeats / 2];
    e.empirical_batch_variance /= static_cast<double>(repeats);
    e.n = u.size();
    e.seed = rng.seed();
    e.method = Method::fft_median;
    return e;
}

PValueEstimate estimate_pvalue_auto(const SampleVector& u, const SampleVector& v, double t,
                                    const AccuracySpec& acc, const RngStream& rng, const EstimatorOptions& opts) {
    acc.validate();
    if (acc.delta >= 0.25) return estimate_pvalue(u, v, t, acc, rng, opts);
    AccuracySpec quarter = acc;
    quarter.delta = 0.25;
    const unsigned repeats = median_repeats_for(acc.delta);
    const long double linear = acc.batch_count(u.size());
    const long double median = static_cast<long double>(repeats) * quarter.batch_count(u.size());
    if (median < linear) return estimate_pvalue_median(u, v, t, acc, rng, repeats, opts);
    return estimate_pvalue(u, v, t, acc, rng, opts);
}

PValueEstimate conservative_pvalue(const SampleVector& u, const SampleVector& v, std::uint64_t i_max,
                                   const RngStream& rng, const EstimatorOptions& opts) {
    require_same_length(u.size(), v.size(), "conservative_pvalue");
    const std::size_t n = u.size();
    if (i_max >= opts.max_batches) {
        throw CapExceededError("i_max " + std::to_string(i_max) + " exceeds the configured batch maximum");
    }
    const double t = compensated_dot(u.values(), v.values());

    // Group 0: u . alpha^k v for alpha = pi^-1 lambda pi, evaluated as the
    // shift products of the relabelled pair (pi u, pi v).
    std::vector<double> hits(i_max + 1);
    std::uint64_t near = 0;
    {
        RngStream s0 = rng.child(0);
        const Permutation relabel = uniform_permutation(s0, n);
        std::vector<double> ur(n), vr(n);
        apply_into(relabel, u.values(), ur);
        apply_into(relabel, v.values(), vr);
        BatchSampler sampler(u.values(), v.values());
        std::size_t near0 = 0;
        hits[0] = static_cast<double>(sampler.count_at_least(ur, vr, t, near0));
        near += near0;
    }
    if (i_max > 0) {
        const BatchRun run = run_batches(u, v, t, rng, 1, i_max, opts.threads);
        for (std::uint64_t i = 0; i < i_max; ++i) hits[i + 1] = static_cast<double>(run.hits[i]);
        near += run.near;
    }

    const double total = std::accumulate(hits.begin(), hits.end(), 0.0);
    std::vector<double> x(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) x[i] = hits[i] / static_cast<double>(n);

    PValueEstimate e;
    e.estimate = total / (static_cast<double>(n) * static_cast<double>(i_max + 1));
    e.batches = i_max + 1;
    e.n = n;
    e.seed = rng.seed();
    e.empirical_batch_variance = moments(x).variance;
    e.method = Method::conservative;
    e.near_threshold_count = near;
    return e;
}

PValueEstimate naive_mc_pvalue(const SampleVector& u, const SampleVector& v, double t, std::uint64_t m,
                               const RngStream& rng) {
    check_inputs(u, v, t, "naive_mc_pvalue");
    if (m == 0) throw InvalidSizeError("naive_mc_pvalue: sample count must be positive");
    const std::size_t n = u.size();
    const auto uu = u.values();
    const auto vv = v.values();
    const double band = guard_band(norm2(uu), norm2(vv), t);

    RngStream stream = rng;
    Permutation sigma = Permutation::identity(n);
    std::vector<double> gathered(n);
    std::uint64_t hits = 0;
    std::uint64_t near = 0;
    for (std::uint64_t s = 0; s < m; ++s) {
        shuffle_in_place(stream, sigma);
        const auto map = sigma.mapping();
        // (sigma u) . v = sum_j u[j] v[sigma(j)]
        double y = 0.0;
        for (std::size_t j = 0; j < n; ++j) y += uu[j] * vv[map[j]];
        if (std::fabs(y - t) <= band) {
            for (std::size_t j = 0; j < n; ++j) gathered[j] = vv[map[j]];
            y = compensated_dot(uu, gathered);
            ++near;
        }
        if (y >= t) ++hits;
    }

    PValueEstimate e;
    const double p = static_cast<double>(hits) / static_cast<double>(m);
    e.estimate = p;
    e.batches = m;
    e.n = n;
    e.seed = rng.seed();
    e.empirical_batch_variance = (m > 1) ? p * (1.0 - p) * static_cast<double>(m) / static_cast<double>(m - 1) : 0.0;
    e.method = Method::naive;
    e.near_threshold_count = near;
    return e;
}

PValueEstimate exact_pvalue(const SampleVector& u, const SampleVector& v, double t, std::size_t exact_limit) {
    check_inputs(u, v, t, "exact_pvalue");
    const std::size_t n = u.size();
    if (n > exact_limit) {
        throw CapExceededError("exact_pvalue: n = " + std::to_string(n) + " exceeds the enumeration limit " +
                               std::to_string(exact_limit));
    }
    const auto uu = u.values();
    const auto vv = v.values();
    const double band = guard_band(norm2(uu), norm2(vv), t);

    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    std::vector<double> gathered(n);
    std::uint64_t total = 0;
    std::uint64_t hits = 0;
    std::uint64_t near = 0;
    do {
        double y = 0.0;
        for (std::size_t j = 0; j < n; ++j) y += uu[j] * vv[map[j]];
        if (std::fabs(y - t) <= band) {
            for (std::size_t j = 0; j < n; ++j) gathered[j] = vv[map[j]];
            y = compensated_dot(uu, gathered);
            ++near;
        }
        if (y >= t) ++hits;
        ++total;
    } while (std::next_permutation(map.begin(), map.end()));

    PValueEstimate e;
    e.estimate = static_cast<double>(hits) / static_cast<double>(total);
    e.batches = total;
    e.n = n;
    e.seed = 0;
    e.empirical_batch_variance = 0.0;
    e.method = Method::exact;
    e.near_threshold_count = near;
    return e;
}

CovarianceReport empirical_covariance_probe(const SampleVector& u, const SampleVector& v, double t,
                                            std::uint64_t trials, const RngStream& rng,
                                            const CovarianceProbeOptions& opts) {
    check_inputs(u, v, t, "empirical_covariance_probe");
    if (trials < 2) throw InvalidSizeError("empirical_covariance_probe: need at least 2 trials");
    const std::size_t n = u.size();
    const double nd = static_cast<double>(n);

    CovarianceReport rep;
    rep.n = n;
    rep.t = t;
    rep.trials = trials;
    if (n <= opts.exact_limit) {
        rep.p_reference = exact_pvalue(u, v, t, opts.exact_limit).estimate;
        rep.p_reference_exact = true;
    } else {
        const std::uint64_t m = opts.reference_samples;
        rep.p_reference = naive_mc_pvalue(u, v, t, m, rng.child(kReferenceDomain)).estimate;
        rep.p_reference_std_error = std::sqrt(rep.p_reference * (1.0 - rep.p_reference) / static_cast<double>(m));
    }
    const double p = rep.p_reference;

    const BatchRun run = run_batches(u, v, t, rng, 0, trials, opts.threads);
    std::vector<double> x(trials);
    std::vector<double> pair_rate(trials);
    for (std::uint64_t i = 0; i < trials; ++i) {
        const double h = static_cast<double>(run.hits[i]);
        x[i] = h / nd;
        // Fraction of ordered pairs j != k with z_j = z_k = 1.
        pair_rate[i] = (h * h - h) / (nd * (nd - 1.0));
    }
    const Moments mx = moments(x);
    const Moments mp = moments(pair_rate);
    rep.mean_batch = mx.mean;
    rep.batch_variance = mx.variance;
    const double bernoulli = p * (1.0 - p);
    if (mx.variance == 0.0) {
        rep.variance_ratio = 0.0;
    } else {
        rep.variance_ratio = (bernoulli > 0.0) ? nd * mx.variance / bernoulli : INFINITY;
    }
    rep.mean_pairwise_covariance = mp.mean - p * p;
    const double td = static_cast<double>(trials);
    rep.covariance_std_error =
        std::sqrt(mp.variance / td + 4.0 * p * p * rep.p_reference_std_error * rep.p_reference_std_error);
    return rep;
}

}  // namespace fastperm
