#include "fastperm/adapters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "fastperm/circulant.hpp"
#include "fastperm/dot.hpp"
#include "fastperm/error.hpp"
#include "fastperm/parallel.hpp"
#include "fastperm/permutation.hpp"

namespace fastperm {

namespace {

constexpr std::uint64_t kRepeatDomain = 0x4d45'4449'0000'0000ULL;

void require_nonconstant(std::span<const double> x, const char* what) {
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end()) {
        throw DegenerateInputError(std::string(what) + ": constant input, correlation undefined");
    }
}

const char* kTieWarning =
    "ties present: the permutation distribution of the rank statistic is not exact under ties";

}  // namespace

std::string_view to_string(TestKind k) {
    switch (k) {
        case TestKind::pearson: return "pearson";
        case TestKind::spearman: return "spearman";
        case TestKind::mann_whitney: return "mann-whitney";
        case TestKind::kruskal_wallis: return "kruskal-wallis";
    }
    return "unknown";
}

std::optional<TestKind> parse_test_kind(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '_', '-');
    for (TestKind k : {TestKind::pearson, TestKind::spearman, TestKind::mann_whitney, TestKind::kruskal_wallis}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

TestReduction pearson_reduction(const SampleVector& x, const SampleVector& y) {
    require_same_length(x.size(), y.size(), "pearson_reduction");
    if (x.size() < 3) throw InvalidSizeError("pearson_reduction: need at least 3 pairs");
    require_nonconstant(x.values(), "pearson_reduction (x)");
    require_nonconstant(y.values(), "pearson_reduction (y)");
    return TestReduction{x, y, compensated_dot(x.values(), y.values()), false, TestKind::pearson, {}};
}

TestReduction spearman_reduction(const SampleVector& x, const SampleVector& y) {
    require_same_length(x.size(), y.size(), "spearman_reduction");
    if (x.size() < 3) throw InvalidSizeError("spearman_reduction: need at least 3 pairs");
    require_nonconstant(x.values(), "spearman_reduction (x)");
    require_nonconstant(y.values(), "spearman_reduction (y)");
    SampleVector rx = midranks(x);
    SampleVector ry = midranks(y);
    const double t = compensated_dot(rx.values(), ry.values());
    TestReduction r{std::move(rx), std::move(ry), t, has_ties(x.values()) || has_ties(y.values()),
                    TestKind::spearman, {}};
    if (r.tie_flag) r.warnings.emplace_back(kTieWarning);
    return r;
}

TestReduction mann_whitney_reduction(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw InvalidSizeError("mann_whitney_reduction: both groups must be nonempty");
    require_finite(xs, "mann_whitney_reduction (X)");
    require_finite(ys, "mann_whitney_reduction (Y)");
    std::vector<double> pooled(xs.begin(), xs.end());
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    std::vector<double> indicator(pooled.size(), 0.0);
    std::fill(indicator.begin() + static_cast<std::ptrdiff_t>(xs.size()), indicator.end(), 1.0);
    SampleVector u(std::move(indicator));
    SampleVector v(midranks(pooled));
    const double t = compensated_dot(u.values(), v.values());
    const bool ties = has_ties(pooled);
    TestReduction r{std::move(u), std::move(v), t, ties, TestKind::mann_whitney, {}};
    if (ties) r.warnings.emplace_back(kTieWarning);
    return r;
}

void GroupedSample::validate() const {
    if (group_sizes.size() < 2) throw InvalidSizeError("grouped sample needs at least 2 groups");
    for (std::size_t s : group_sizes) {
        if (s == 0) throw InvalidSizeError("grouped sample has an empty group");
    }
    const std::size_t n = std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0});
    if (n != values.size()) throw DimensionError("group sizes do not sum to the number of observations");
    require_finite(values, "grouped sample");
}

double kruskal_wallis_h(std::span<const double> rank_sums, std::span<const std::size_t> sizes,
                        double tie_correction) {
    const double n = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
    double s = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) s += rank_sums[i] * rank_sums[i] / static_cast<double>(sizes[i]);
    return (12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0)) / tie_correction;
}

KruskalWallisSetup kruskal_wallis_setup(const GroupedSample& g) {
    g.validate();
    KruskalWallisSetup k;
    k.ranks = midranks(g.values);
    k.group_sizes = g.group_sizes;
    const double n = static_cast<double>(g.total());

    std::map<double, std::size_t> counts;
    for (double x : g.values) ++counts[x];
    double tie_sum = 0.0;
    for (const auto& [value, c] : counts) {
        const double t = static_cast<double>(c);
        tie_sum += t * t * t - t;
        if (c > 1) k.tie_flag = true;
    }
    k.tie_correction = 1.0 - tie_sum / (n * n * n - n);
    if (counts.size() == 1) {
        k.degenerate = true;
        k.warnings.emplace_back("all observations are equal: H is undefined, reporting p = 1");
        return k;
    }
    if (g.total() == g.group_sizes.size()) {
        // Singleton groups: H = N - 1 for every relabelling.
        k.degenerate = true;
        k.observed_h = n - 1.0;
        k.warnings.emplace_back("every group has one observation: H is constant, reporting p = 1");
        return k;
    }
    if (k.tie_flag) k.warnings.emplace_back(kTieWarning);

    std::vector<double> sums(g.group_sizes.size(), 0.0);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < g.group_sizes.size(); ++i) {
        for (std::size_t j = 0; j < g.group_sizes[i]; ++j) sums[i] += k.ranks[pos++];
    }
    k.observed_h = kruskal_wallis_h(sums, k.group_sizes, k.tie_correction);
    return k;
}

namespace {

// H is an increasing function of S = sum_i R_i^2 / n_i once N and the tie
// correction are fixed, so all comparisons are made on S. Rank sums are
// multiples of 1/2; FFT output is snapped to that grid before use.
class KwSampler {
public:
    explicit KwSampler(const KruskalWallisSetup& setup)
        : sizes_(setup.group_sizes),
          ranks_(setup.ranks),
          n_(setup.ranks.size()),
          correlator_(n_),
          sigma1_(Permutation::identity(n_)),
          sigma2_(Permutation::identity(n_)),
          indicators_(sizes_.size(), std::vector<double>(n_, 0.0)),
          permuted_ind_(n_),
          permuted_ranks_(n_),
          sums_(sizes_.size(), std::vector<double>(n_)) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            for (std::size_t j = 0; j < sizes_[i]; ++j) indicators_[i][pos++] = 1.0;
        }
    }

    double statistic(std::span<const double> rank_sums) const {
        double s = 0.0;
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            s += rank_sums[i] * rank_sums[i] / static_cast<double>(sizes_[i]);
        }
        return s;
    }

    static bool at_least(double s, double observed) {
        return s >= observed - 1e-12 * std::fabs(observed);
    }

    // Counts shifts whose statistic reaches `observed` for the pair
    // (group indicators relabelled by `left`, ranks relabelled by `right`).
    std::size_t count(const Permutation& left, const Permutation& right, double observed) {
        apply_into(right, ranks_, permuted_ranks_);
        correlator_.load_right(permuted_ranks_);
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            apply_into(left, indicators_[i], permuted_ind_);
            correlator_.correlate_loaded(permuted_ind_, sums_[i]);
        }
        std::vector<double> at_shift(sizes_.size());
        std::size_t hits = 0;
        for (std::size_t k = 0; k < n_; ++k) {
            for (std::size_t i = 0; i < sizes_.size(); ++i) at_shift[i] = std::round(2.0 * sums_[i][k]) * 0.5;
            if (at_least(statistic(at_shift), observed)) ++hits;
        }
        return hits;
    }

    std::size_t run(const RngStream& batch, double observed) {
        RngStream s1 = batch.child(1);
        RngStream s2 = batch.child(2);
        shuffle_in_place(s1, sigma1_);
        shuffle_in_place(s2, sigma2_);
        return count(sigma1_, sigma2_, observed);
    }

    std::size_t size() const noexcept { return n_; }

private:
    std::vector<std::size_t> sizes_;
    std::vector<double> ranks_;
    std::size_t n_;
    CirculantCorrelator correlator_;
    Permutation sigma1_;
    Permutation sigma2_;
    std::vector<std::vector<double>> indicators_;
    std::vector<double> permuted_ind_;
    std::vector<double> permuted_ranks_;
    std::vector<std::vector<double>> sums_;
};

double observed_statistic(const KruskalWallisSetup& k) {
    std::vector<double> sums(k.group_sizes.size(), 0.0);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < k.group_sizes.size(); ++i) {
        for (std::size_t j = 0; j < k.group_sizes[i]; ++j) sums[i] += k.ranks[pos++];
    }
    double s = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i) s += sums[i] * sums[i] / static_cast<double>(k.group_sizes[i]);
    return s;
}

PValueEstimate degenerate_estimate(const GroupedSample& g, Method m, std::uint64_t seed) {
    PValueEstimate e;
    e.estimate = 1.0;
    e.batches = 1;
    e.n = g.total();
    e.seed = seed;
    e.method = m;
    return e;
}

std::vector<std::size_t> kw_batches(const KruskalWallisSetup& k, double observed, const RngStream& rng,
                                    std::uint64_t first, std::uint64_t count, unsigned threads) {
    std::vector<std::size_t> hits(count);
    detail::parallel_indexed(
        count, threads, [&] { return KwSampler(k); },
        [&](KwSampler& s, std::uint64_t i) { hits[i] = s.run(rng.child(first + i), observed); });
    return hits;
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (double xi : x) ss += (xi - mean) * (xi - mean);
    return ss / static_cast<double>(x.size() - 1);
}

}  // namespace

PValueEstimate kruskal_wallis_pvalue(const GroupedSample& g, const AccuracySpec& acc, const RngStream& rng,
                                     const EstimatorOptions& opts) {
    const KruskalWallisSetup k = kruskal_wallis_setup(g);
    acc.validate();
    if (k.degenerate) return degenerate_estimate(g, Method::fft, rng.seed());
    const std::size_t n = g.total();
    const std::uint64_t batches = acc.batch_count(n);
    if (batches > opts.max_batches) {
        throw CapExceededError("batch count " + std::to_string(batches) + " exceeds the configured maximum");
    }
    const auto hits = kw_batches(k, observed_statistic(k), rng, 0, batches, opts.threads);
    std::vector<double> x(batches);
    for (std::uint64_t i = 0; i < batches; ++i) x[i] = static_cast<double>(hits[i]) / static_cast<double>(n);

    PValueEstimate e;
    e.estimate = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(batches);
    e.batches = batches;
    e.n = n;
    e.seed = rng.seed();
    e.empirical_batch_variance = sample_variance(x);
    e.method = Method::fft;
    return e;
}

PValueEstimate kruskal_wallis_pvalue_median(const GroupedSample& g, const AccuracySpec& acc,
                                            const RngStream& rng, unsigned repeats,
                                            const EstimatorOptions& opts) {
    if (repeats == 0 || repeats % 2 == 0) {
        throw std::invalid_argument("median trick needs an odd positive repeat count");
    }
    AccuracySpec inner = acc;
    inner.delta = 0.25;
    std::vector<double> values;
    PValueEstimate e;
    for (unsigned r = 0; r < repeats; ++r) {
        const RngStream stream = (r == 0) ? rng : rng.child(kRepeatDomain + r);
        const PValueEstimate one = kruskal_wallis_pvalue(g, inner, stream, opts);
        values.push_back(one.estimate);
        e.batches += one.batches;
        e.empirical_batch_variance += one.empirical_batch_variance;
    }
    std::nth_element(values.begin(), values.begin() + repeats / 2, values.end());
    e.estimate = values[repeats / 2];
    e.empirical_batch_variance /= static_cast<double>(repeats);
    e.n = g.total();
    e.seed = rng.seed();
    e.method = Method::fft_median;
    return e;
}

PValueEstimate kruskal_wallis_conservative(const GroupedSample& g, std::uint64_t i_max, const RngStream& rng,
                                           const EstimatorOptions& opts) {
    const KruskalWallisSetup k = kruskal_wallis_setup(g);
    if (k.degenerate) return degenerate_estimate(g, Method::conservative, rng.seed());
    if (i_max >= opts.max_batches) throw CapExceededError("i_max exceeds the configured batch maximum");
    const std::size_t n = g.total();
    const double observed = observed_statistic(k);

    std::vector<double> x(i_max + 1);
    {
        RngStream s0 = rng.child(0);
        const Permutation relabel = uniform_permutation(s0, n);
        KwSampler sampler(k);
        x[0] = static_cast<double>(sampler.count(relabel, relabel, observed));
    }
    if (i_max > 0) {
        const auto hits = kw_batches(k, observed, rng, 1, i_max, opts.threads);
        for (std::uint64_t i = 0; i < i_max; ++i) x[i + 1] = static_cast<double>(hits[i]);
    }
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    for (double& xi : x) xi /= static_cast<double>(n);

    PValueEstimate e;
    e.estimate = total / (static_cast<double>(n) * static_cast<double>(i_max + 1));
    e.batches = i_max + 1;
    e.n = n;
    e.seed = rng.seed();
    e.empirical_batch_variance = sample_variance(x);
    e.method = Method::conservative;
    return e;
}

PValueEstimate kruskal_wallis_naive(const GroupedSample& g, std::uint64_t m, const RngStream& rng) {
    const KruskalWallisSetup k = kruskal_wallis_setup(g);
    if (m == 0) throw InvalidSizeError("kruskal_wallis_naive: sample count must be positive");
    if (k.degenerate) return degenerate_estimate(g, Method::naive, rng.seed());
    const std::size_t n = g.total();
    const double observed = observed_statistic(k);
    KwSampler helper(k);

    RngStream stream = rng;
    Permutation sigma = Permutation::identity(n);
    std::vector<double> sums(k.group_sizes.size());
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < m; ++s) {
        shuffle_in_place(stream, sigma);
        const auto map = sigma.mapping();
        std::fill(sums.begin(), sums.end(), 0.0);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < k.group_sizes.size(); ++i) {
            for (std::size_t j = 0; j < k.group_sizes[i]; ++j, ++pos) sums[i] += k.ranks[map[pos]];
        }
        if (KwSampler::at_least(helper.statistic(sums), observed)) ++hits;
    }
    PValueEstimate e;
    const double p = static_cast<double>(hits) / static_cast<double>(m);
    e.estimate = p;
    e.batches = m;
    e.n = n;
    e.seed = rng.seed();
    e.empirical_batch_variance = (m > 1) ? p * (1.0 - p) * static_cast<double>(m) / static_cast<double>(m - 1) : 0.0;
    e.method = Method::naive;
    return e;
}

PValueEstimate kruskal_wallis_exact(const GroupedSample& g, std::size_t exact_limit) {
    const KruskalWallisSetup k = kruskal_wallis_setup(g);
    const std::size_t n = g.total();
    if (n > exact_limit) {
        throw CapExceededError("kruskal_wallis_exact: N = " + std::to_string(n) +
                               " exceeds the enumeration limit " + std::to_string(exact_limit));
    }
    if (k.degenerate) return degenerate_estimate(g, Method::exact, 0);
    const double observed = observed_statistic(k);
    KwSampler helper(k);

    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    std::vector<double> sums(k.group_sizes.size());
    std::uint64_t total = 0;
    std::uint64_t hits = 0;
    do {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < k.group_sizes.size(); ++i) {
            for (std::size_t j = 0; j < k.group_sizes[i]; ++j, ++pos) sums[i] += k.ranks[map[pos]];
        }
        if (KwSampler::at_least(helper.statistic(sums), observed)) ++hits;
        ++total;
    } while (std::next_permutation(map.begin(), map.end()));

    PValueEstimate e;
    e.estimate = static_cast<double>(hits) / static_cast<double>(total);
    e.batches = total;
    e.n = n;
    e.method = Method::exact;
    return e;
}

}  // namespace fastperm
