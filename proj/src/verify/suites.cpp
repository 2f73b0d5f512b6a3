#include "fastperm/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "fastperm/bounds.hpp"
#include "fastperm/characters.hpp"
#include "fastperm/circulant.hpp"
#include "fastperm/dot.hpp"
#include "fastperm/estimators.hpp"
#include "fastperm/lattice.hpp"
#include "fastperm/parallel.hpp"
#include "fastperm/partitions.hpp"
#include "fastperm/permutation.hpp"
#include "fastperm/sampler.hpp"

namespace fastperm {

namespace {

std::string str(const BigInt& x) { return x.str(); }

std::vector<double> gaussian(RngStream& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

// The q-quantile of one batch's shift products of (u, v).
double shift_quantile(const SampleVector& u, const SampleVector& v, double q, const RngStream& rng) {
    BatchSampler s(u.values(), v.values());
    s.run(0.0, rng);
    std::vector<double> y(s.shift_products().begin(), s.shift_products().end());
    std::sort(y.begin(), y.end());
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(y.size() - 1)));
    return y[idx];
}

}  // namespace

std::string_view to_string(VerifyScope s) {
    switch (s) {
        case VerifyScope::lattice: return "lattice";
        case VerifyScope::characters: return "characters";
        case VerifyScope::bounds: return "bounds";
        case VerifyScope::covariance: return "covariance";
        case VerifyScope::conservative: return "conservative";
        case VerifyScope::all: return "all";
    }
    return "unknown";
}

std::optional<VerifyScope> parse_verify_scope(std::string_view name) {
    for (VerifyScope s : {VerifyScope::lattice, VerifyScope::characters, VerifyScope::bounds,
                          VerifyScope::covariance, VerifyScope::conservative, VerifyScope::all}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::info: return "info";
    }
    return "unknown";
}

bool SuiteReport::ok() const {
    return std::none_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.status == CheckStatus::fail; });
}

void SuiteReport::add(std::string suite, std::string name, bool passed, std::string detail) {
    lines.push_back({std::move(suite), std::move(name), passed ? CheckStatus::pass : CheckStatus::fail,
                     std::move(detail)});
}

void SuiteReport::info(std::string suite, std::string name, std::string detail) {
    lines.push_back({std::move(suite), std::move(name), CheckStatus::info, std::move(detail)});
}

SuiteReport verify_lattice(const SuiteOptions& opts) {
    SuiteReport rep;
    const RngStream root(opts.seed, 0x1a77);
    for (std::size_t n = 2; n <= 8; ++n) {
        const bool exhaustive = n <= 6;
        const int instances = exhaustive ? 3 : 2;
        std::uint64_t sets = 0;
        std::uint64_t not_upper = 0;
        std::uint64_t over_bound = 0;
        std::uint64_t sign_breaks = 0;
        std::int64_t max_abs = 0;
        const std::int64_t bound = static_cast<std::int64_t>(factorial(static_cast<int>(n)) / n);
        const std::int64_t sign = ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1;
        std::string first_failure;
        for (int inst = 0; inst < instances; ++inst) {
            RngStream rng = root.child(n * 16 + static_cast<std::uint64_t>(inst));
            std::vector<double> u = gaussian(rng, n);
            std::vector<double> v = gaussian(rng, n);
            if (inst == instances - 1) {
                // Integer data with ties.
                for (double& x : u) x = std::floor(3.0 * rng.uniform01());
                for (double& x : v) x = std::floor(3.0 * rng.uniform01());
            }
            std::sort(u.begin(), u.end());
            std::sort(v.begin(), v.end());
            const SampleVector su(u);
            const SampleVector sv(v);

            std::vector<double> products;
            std::vector<std::size_t> map(n);
            std::iota(map.begin(), map.end(), std::size_t{0});
            std::vector<double> g(n);
            do {
                for (std::size_t j = 0; j < n; ++j) g[j] = v[map[j]];
                products.push_back(compensated_dot(u, g));
            } while (std::next_permutation(map.begin(), map.end()));
            std::sort(products.begin(), products.end());
            products.erase(std::unique(products.begin(), products.end()), products.end());

            std::vector<double> thresholds;
            if (exhaustive) {
                thresholds = products;
            } else {
                for (int k = 0; k < 6; ++k) thresholds.push_back(products[rng.below(products.size())]);
            }
            thresholds.push_back(products.front() - 1.0);
            thresholds.push_back(products.back() + 1.0);

            for (double t : thresholds) {
                const auto set = threshold_set(su, sv, t);
                ++sets;
                const std::int64_t d = discrepancy(set);
                const std::int64_t a = alternating_sum(set);
                max_abs = std::max(max_abs, std::abs(d));
                const bool upper = is_upper_set(set, n);
                not_upper += !upper;
                over_bound += std::abs(d) > bound;
                sign_breaks += (d != sign * a);
                if (first_failure.empty() && (!upper || std::abs(d) > bound || d != sign * a)) {
                    std::ostringstream os;
                    os << "instance " << inst << " t=" << t << " |S|=" << set.size() << " disc=" << d
                       << " alt=" << a;
                    first_failure = os.str();
                }
            }
        }
        const std::string tag = "n=" + std::to_string(n) + (exhaustive ? " exhaustive" : " randomized");
        rep.add("lattice", "threshold sets are upper sets, " + tag, not_upper == 0,
                std::to_string(sets) + " sets, " + std::to_string(not_upper) + " violations" +
                    (first_failure.empty() ? "" : "; first: " + first_failure));
        rep.add("lattice", "|discrepancy| <= n!/n, " + tag, over_bound == 0,
                "max |disc| = " + std::to_string(max_abs) + ", bound " + std::to_string(bound));
        rep.add("lattice", "discrepancy = (-1)^(n(n-1)/2) * alternating sum, " + tag, sign_breaks == 0,
                std::to_string(sign_breaks) + " mismatches");
    }
    return rep;
}

SuiteReport verify_characters(const SuiteOptions& opts) {
    SuiteReport rep;
    for (int n = 1; n <= opts.character_max_n; ++n) {
        BigInt sum = 0;
        for (const Partition& p : partitions(n)) {
            const BigInt d = hook_dimension(p);
            sum += d * d;
        }
        rep.add("characters", "Plancherel n=" + std::to_string(n), sum == factorial(n),
                "sum d^2 = " + str(sum) + ", n! = " + str(factorial(n)));
    }
    for (int n = 1; n <= opts.orthogonality_max_n; ++n) {
        const auto parts = partitions(n);
        MnEvaluator eval(opts.character_max_n);
        std::vector<std::vector<BigInt>> table(parts.size());
        for (std::size_t c = 0; c < parts.size(); ++c) {
            const CycleType cls(parts[c].parts());
            for (std::size_t p = 0; p < parts.size(); ++p) table[c].push_back(eval.character(parts[p], cls));
        }
        std::size_t bad = 0;
        for (std::size_t a = 0; a < parts.size(); ++a) {
            const BigInt centralizer = factorial(n) / CycleType(parts[a].parts()).class_size();
            for (std::size_t b = 0; b < parts.size(); ++b) {
                BigInt s = 0;
                for (std::size_t p = 0; p < parts.size(); ++p) s += table[a][p] * table[b][p];
                const BigInt expect = (a == b) ? centralizer : BigInt(0);
                bad += (s != expect);
            }
        }
        rep.add("characters", "column orthogonality n=" + std::to_string(n), bad == 0,
                std::to_string(parts.size()) + " classes, " + std::to_string(bad) + " failing pairs");
    }
    for (int n = 2; n <= opts.character_max_n; ++n) {
        const Partition standard({n - 1, 1});
        const Partition standard_t = standard.conjugate();
        MnEvaluator eval(opts.character_max_n);
        std::string failures;
        for (int r = 2; r <= n; ++r) {
            if (n % r) continue;
            const CycleType cls = CycleType::rectangular(r, n / r);
            for (const Partition& p : {standard, standard_t}) {
                const BigInt chi = eval.character(p, cls);
                if (abs(chi) != 1) failures += " " + p.to_string() + cls.to_string() + "=" + str(chi);
            }
        }
        rep.add("characters", "|chi_(n-1,1)([r^m])| = 1 and conjugate, n=" + std::to_string(n), failures.empty(),
                failures.empty() ? "all r | n" : "failures:" + failures);
    }
    return rep;
}

SuiteReport verify_bounds(const SuiteOptions& opts) {
    SuiteReport rep;
    for (int n = 2; n <= opts.character_max_n; ++n) {
        for (int r = 1; r <= n; ++r) {
            if (n % r) continue;
            const FominLulovReport fl = fomin_lulov_check(n, r, opts.character_max_n);
            std::ostringstream os;
            os << fl.entries.size() << " partitions, tightest " << (fl.tightest ? fl.tightest->to_string() : "-")
               << " slack " << fl.tightest_slack;
            for (const auto& e : fl.entries) {
                if (!e.holds) os << "; violated by " << e.partition.to_string();
            }
            rep.add("bounds", "Fomin-Lulov n=" + std::to_string(n) + " r=" + std::to_string(r), fl.all_hold, os.str());

            if (r == 1) continue;
            const CharacterRatioReport cr = character_ratio_max(n, r, opts.character_max_n);
            if (cr.argmax) {
                std::ostringstream ratio;
                ratio << "max |chi|/d = " << cr.ratio << " (" << cr.ratio.convert_to<double>() << ") at "
                      << cr.argmax->to_string() << "; large-n reference " << cr.reference_bound;
                rep.info("bounds", "character ratio n=" + std::to_string(n) + " r=" + std::to_string(r), ratio.str());
            }
        }
    }
    for (int n : {10, 20}) {
        const DimensionReport d = dim_bound_report(n);
        std::ostringstream os;
        os << "min d outside exceptional set = " << d.min_dimension << " at "
           << (d.min_partition ? d.min_partition->to_string() : "-") << "; n^2/3 = " << (n * n / 3.0)
           << "; all exceed: " << (d.all_exceed ? "yes" : "no") << " (asymptotic statement, n >= 400)";
        rep.info("bounds", "dimension report n=" + std::to_string(n), os.str());
        std::ostringstream ex;
        for (std::size_t i = 0; i < d.exceptional.size(); ++i) {
            ex << d.exceptional[i].to_string() << "->" << d.exceptional_dimensions[i] << " ";
        }
        bool ok = true;
        for (std::size_t i = 0; i < d.exceptional.size(); ++i) {
            const BigInt dim = d.exceptional_dimensions[i];
            ok = ok && (dim == 1 || dim == n - 1);
        }
        rep.add("bounds", "exceptional dimensions are 1, 1, n-1, n-1 at n=" + std::to_string(n), ok, ex.str());
    }
    return rep;
}

SuiteReport verify_covariance(const SuiteOptions& opts) {
    SuiteReport rep;
    const RngStream root(opts.seed, 0xc0fa);
    for (std::size_t n : {256u, 1024u}) {
        RngStream rng = root.child(n);
        const SampleVector u(gaussian(rng, n));
        const SampleVector v(gaussian(rng, n));
        const double t = shift_quantile(u, v, 0.95, root.child(n + 1));
        CovarianceProbeOptions po;
        po.threads = opts.threads;
        po.reference_samples = 100'000;
        const CovarianceReport c = empirical_covariance_probe(u, v, t, 2000, root.child(n + 2), po);
        std::ostringstream os;
        os << "p=" << c.p_reference << " n Var(x)/(p(1-p)) = " << c.variance_ratio;
        rep.add("covariance", "variance ratio <= 1.2 at n=" + std::to_string(n), c.variance_ratio <= 1.2, os.str());
    }
    for (std::size_t n : {6u, 64u, 512u}) {
        RngStream rng = root.child(1000 + n);
        const SampleVector u(gaussian(rng, n));
        const SampleVector v(gaussian(rng, n));
        const double t = shift_quantile(u, v, 0.5, root.child(2000 + n));
        CovarianceProbeOptions po;
        po.threads = opts.threads;
        po.reference_samples = 100'000;
        const CovarianceReport c = empirical_covariance_probe(u, v, t, 4000, root.child(3000 + n), po);
        std::ostringstream os;
        os << "mean pairwise cov = " << c.mean_pairwise_covariance << " +- " << c.covariance_std_error
           << (c.mean_pairwise_covariance <= 3.0 * c.covariance_std_error ? " (nonpositive within 3 SE)"
                                                                          : " (positive beyond 3 SE)");
        rep.info("covariance", "pairwise covariance sign n=" + std::to_string(n), os.str());
    }
    return rep;
}

UniformityResult conservative_uniformity(std::size_t n, std::uint64_t i_max, std::uint64_t trials,
                                         std::uint64_t seed, unsigned threads) {
    UniformityResult res;
    res.n = n;
    res.i_max = i_max;
    res.trials = trials;
    const std::uint64_t grid = n * (i_max + 1);
    res.counts.assign(grid, 0);
    std::vector<std::uint64_t> rank(trials);
    const RngStream root(seed, 0xc005);
    detail::parallel_indexed(
        trials, threads, [] { return 0; },
        [&](int&, std::uint64_t i) {
            RngStream data = root.child(2 * i);
            std::vector<double> u(n), v(n);
            for (double& x : u) x = data.normal();
            for (double& x : v) x = data.normal();
            const PValueEstimate e = conservative_pvalue(SampleVector(u), SampleVector(v), i_max, root.child(2 * i + 1));
            rank[i] = static_cast<std::uint64_t>(std::llround(e.estimate * static_cast<double>(grid)));
        });
    for (std::uint64_t r : rank) {
        if (r >= 1 && r <= grid) ++res.counts[r - 1];
    }
    const double expected = static_cast<double>(trials) / static_cast<double>(grid);
    for (std::uint64_t c : res.counts) {
        const double d = static_cast<double>(c) - expected;
        res.chi_square += d * d / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(grid - 1));
    res.critical_value = boost::math::quantile(boost::math::complement(dist, 0.001));
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.chi_square));
    res.chi_square_pass = res.chi_square <= res.critical_value;

    std::uint64_t cumulative = 0;
    res.worst_excess = -INFINITY;
    for (std::uint64_t r = 1; r <= grid; ++r) {
        cumulative += res.counts[r - 1];
        const double alpha = static_cast<double>(r) / static_cast<double>(grid);
        const double empirical = static_cast<double>(cumulative) / static_cast<double>(trials);
        const double slack = 3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(trials));
        res.worst_excess = std::max(res.worst_excess, empirical - alpha - slack);
    }
    res.excess_pass = res.worst_excess <= 0.0;
    return res;
}

SuiteReport verify_conservative(const SuiteOptions& opts) {
    SuiteReport rep;
    const UniformityResult u = conservative_uniformity(6, 4, opts.conservative_trials, opts.seed, opts.threads);
    std::ostringstream os;
    os << "chi2 = " << u.chi_square << " (df " << u.counts.size() - 1 << ", critical " << u.critical_value
       << ", p = " << u.p_value << ")";
    rep.add("conservative", "grid uniformity n=6 i_max=4", u.chi_square_pass, os.str());
    std::ostringstream ex;
    ex << "max_alpha P(ret <= alpha) - alpha - 3 SE = " << u.worst_excess;
    rep.add("conservative", "P(ret <= alpha) <= alpha + 3 SE", u.excess_pass, ex.str());
    return rep;
}

SuiteReport run_verify(VerifyScope scope, const SuiteOptions& opts) {
    SuiteReport all;
    auto append = [&](const SuiteReport& r) { all.lines.insert(all.lines.end(), r.lines.begin(), r.lines.end()); };
    const bool every = scope == VerifyScope::all;
    if (every || scope == VerifyScope::lattice) append(verify_lattice(opts));
    if (every || scope == VerifyScope::characters) append(verify_characters(opts));
    if (every || scope == VerifyScope::bounds) append(verify_bounds(opts));
    if (every || scope == VerifyScope::covariance) append(verify_covariance(opts));
    if (every || scope == VerifyScope::conservative) append(verify_conservative(opts));
    return all;
}

}  // namespace fastperm
