// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// hard criterion fails. Criterion 3 is a report and never fails the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fastperm/adapters.hpp"
#include "fastperm/characters.hpp"
#include "fastperm/cli/commands.hpp"
#include "fastperm/dot.hpp"
#include "fastperm/estimators.hpp"
#include "fastperm/sampler.hpp"
#include "fastperm/suites.hpp"
#include "oracles.hpp"

using namespace fastperm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    bool report_only = false;
};

std::vector<double> gaussian(RngStream& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Quantile of shift products collected from a few batches.
double shift_quantile(const std::vector<double>& u, const std::vector<double>& v, double q, const RngStream& rng,
                      int batches) {
    BatchSampler s(u, v);
    std::vector<double> all;
    for (int b = 0; b < batches; ++b) {
        s.run(0.0, rng.child(b));
        const auto y = s.shift_products();
        all.insert(all.end(), y.begin(), y.end());
    }
    const std::size_t idx = static_cast<std::size_t>(q * (all.size() - 1));
    std::nth_element(all.begin(), all.begin() + idx, all.end());
    return all[idx];
}

Outcome oracle_equivalence() {
    const AccuracySpec acc{0.1, 0.05, 2.0};
    RngStream data(1001, 0);
    std::uint64_t runs = 0, failures = 0;
    double worst_instance = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = 4 + inst % 4;
        const auto u = gaussian(data, n);
        const auto v = gaussian(data, n);
        const double t = compensated_dot(u, v);
        const double p = oracle::brute_force_pvalue(u, v, t, 1e-12L);
        const SampleVector su(u), sv(v);
        int inst_fail = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto e = estimate_pvalue(su, sv, t, acc, RngStream(seed, 5000 + inst));
            const bool bad = std::fabs(e.estimate - p) > 0.1 * std::sqrt(p);
            inst_fail += bad;
            failures += bad;
            ++runs;
        }
        worst_instance = std::max(worst_instance, inst_fail / 200.0);
    }
    const double rate = static_cast<double>(failures) / static_cast<double>(runs);
    return {rate <= 0.07,
            fmt("failure rate %.4f over %llu runs (limit 0.07); worst single instance %.3f", rate,
                static_cast<unsigned long long>(runs), worst_instance)};
}

Outcome variance_reduction() {
    std::ostringstream d;
    bool ok = true;
    for (std::size_t n : {256u, 1024u, 4096u}) {
        RngStream data(2002, n);
        const auto u = gaussian(data, n);
        const auto v = gaussian(data, n);
        const RngStream rng(2003, n);
        const double t = shift_quantile(u, v, 0.95, rng.child(1), 20);
        CovarianceProbeOptions opts;
        opts.reference_samples = 400'000;
        const auto r = empirical_covariance_probe(SampleVector(u), SampleVector(v), t, 4000, rng.child(2), opts);
        ok = ok && r.variance_ratio <= 1.2;
        d << fmt("n=%zu p=%.4f ratio=%.3f; ", n, r.p_reference, r.variance_ratio);
    }
    return {ok, d.str() + "limit 1.2"};
}

Outcome covariance_sign() {
    std::ostringstream d;
    int within = 0, total = 0;
    for (std::size_t n : {6u, 64u, 512u}) {
        int ok_n = 0;
        double worst_z = -1e300;
        for (int inst = 0; inst < 20; ++inst) {
            RngStream data(3003, n * 100 + inst);
            const auto u = gaussian(data, n);
            const auto v = gaussian(data, n);
            const RngStream rng(3004, n * 100 + inst);
            const double t = shift_quantile(u, v, 0.5, rng.child(1), 20);
            const auto r = empirical_covariance_probe(SampleVector(u), SampleVector(v), t, n <= 6 ? 20000 : 4000,
                                                      rng.child(2));
            const double z = r.covariance_std_error > 0 ? r.mean_pairwise_covariance / r.covariance_std_error : 0.0;
            worst_z = std::max(worst_z, z);
            ok_n += (r.mean_pairwise_covariance <= 3 * r.covariance_std_error);
        }
        within += ok_n;
        total += 20;
        d << fmt("n=%zu: %d/20 nonpositive within 3 SE, max z=%.2f; ", n, ok_n, worst_z);
    }
    return {within == total, d.str(), true};
}

Outcome conservative_uniformity_check() {
    const auto r = conservative_uniformity(6, 4, 20000, 4004);
    return {r.chi_square_pass && r.excess_pass,
            fmt("chi2=%.2f critical=%.2f (p=%.4f); max excess over alpha+3SE=%.5f", r.chi_square, r.critical_value,
                r.p_value, r.worst_excess)};
}

Outcome speed() {
    const auto row = cli::measure_speed(65536, 5005, 15, 0);
    bool ok = row.speedup >= 10.0;
    std::ostringstream d;
    d << fmt("n=65536 fft batch median %.3f ms, naive %.1f ms, speedup %.1fx (need 10x); doubling ratios of median batch:",
             row.fft_batch_median_ms, row.naive_ms, row.speedup);
    std::vector<std::size_t> sizes;
    for (std::size_t n = 1u << 12; n <= (1u << 18); n <<= 1) sizes.push_back(n);
    const auto timings = cli::time_fft_batches(sizes, 5006, 15);
    double worst = 0.0;
    for (std::size_t i = 1; i < timings.size(); ++i) {
        const double ratio = timings[i].median_ms / timings[i - 1].median_ms;
        worst = std::max(worst, ratio);
        d << fmt(" %.2f", ratio);
    }
    ok = ok && worst <= 2.5;
    d << fmt(" (max %.2f, limit 2.5)", worst);
    return {ok, d.str()};
}

Outcome suite_outcome(const SuiteReport& rep) {
    int pass = 0, fail = 0, info = 0;
    std::string first_failure;
    for (const auto& l : rep.lines) {
        if (l.status == CheckStatus::pass) ++pass;
        if (l.status == CheckStatus::info) ++info;
        if (l.status == CheckStatus::fail) {
            ++fail;
            if (first_failure.empty()) first_failure = l.name + ": " + l.detail;
        }
    }
    std::string d = fmt("%d checks passed, %d failed, %d informational", pass, fail, info);
    if (!first_failure.empty()) d += "; first failure " + first_failure;
    return {fail == 0 && pass > 0, d};
}

Outcome representation_theory() {
    SuiteOptions opts;
    SuiteReport rep = verify_characters(opts);
    const SuiteReport b = verify_bounds(opts);
    rep.lines.insert(rep.lines.end(), b.lines.begin(), b.lines.end());
    // Independent anchor: the S_4 table from traces.
    bool s4 = true;
    for (const auto& row : oracle::s4_character_table()) {
        const CycleType c(row.cycle_type);
        s4 = s4 && mn_character(Partition({3, 1}), c) == row.chi_31 && mn_character(Partition({2, 2}), c) == row.chi_22 &&
             mn_character(Partition({2, 1, 1}), c) == row.chi_211;
    }
    rep.add("characters", "S_4 table against trace oracle", s4, "");
    return suite_outcome(rep);
}

Outcome lattice() { return suite_outcome(verify_lattice(SuiteOptions{})); }

Outcome adapter_fidelity() {
    std::ostringstream d;
    bool ok = true;

    const std::vector<double> xs{1, 2}, ys{3, 4};
    const auto mw = mann_whitney_reduction(xs, ys);
    const double pmw = exact_pvalue(mw.u, mw.v, mw.t).estimate;
    ok = ok && pmw == 1.0 / 6;
    d << fmt("mann-whitney p=%.6f; ", pmw);

    double fact = 2;
    bool spearman_ok = true;
    for (std::size_t n = 3; n <= 7; ++n) {
        fact *= static_cast<double>(n);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::cbrt(static_cast<double>(i) - 2.0);
            y[i] = std::exp(static_cast<double>(i) / 3.0);
        }
        const auto r = spearman_reduction(SampleVector(x), SampleVector(y));
        spearman_ok = spearman_ok && exact_pvalue(r.u, r.v, r.t).estimate == 1.0 / fact;
    }
    ok = ok && spearman_ok;
    d << "spearman monotone = 1/n! for n=3..7: " << (spearman_ok ? "yes" : "no") << "; ";

    RngStream rng(8008, 0);
    int kw_cases = 0, kw_agree = 0;
    for (std::size_t total = 3; total <= 7; ++total) {
        for (std::size_t n1 = 1; n1 < total; ++n1) {
            for (int variant = 0; variant < 2; ++variant) {
                GroupedSample g;
                std::vector<int> labels;
                for (std::size_t i = 0; i < total; ++i) {
                    g.values.push_back(variant ? static_cast<double>(rng.below(3)) : rng.normal());
                    labels.push_back(i < n1 ? 0 : 1);
                }
                g.group_sizes = {n1, total - n1};
                if (kruskal_wallis_setup(g).degenerate) continue;
                ++kw_cases;
                kw_agree += kruskal_wallis_exact(g).estimate == oracle::kruskal_wallis_pvalue(g.values, labels, 2);
            }
        }
    }
    ok = ok && kw_agree == kw_cases;
    d << fmt("kruskal-wallis two-group exact vs direct H enumeration: %d/%d agree", kw_agree, kw_cases);
    return {ok, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 oracle equivalence", oracle_equivalence},
        {"2 variance reduction", variance_reduction},
        {"3 covariance sign probe", covariance_sign},
        {"4 conservative uniformity", conservative_uniformity_check},
        {"5 speed", speed},
        {"6 representation theory", representation_theory},
        {"7 lattice", lattice},
        {"8 adapter fidelity", adapter_fidelity},
    };
    int hard_failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* status = o.pass ? "PASS" : (o.report_only ? "REPORT-FAIL" : "FAIL");
        if (!o.pass && !o.report_only) ++hard_failures;
        std::printf("[%s] criterion %s (%.1fs): %s\n", status, name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%s\n", hard_failures == 0 ? "acceptance: all hard criteria passed" : "acceptance: FAILED");
    return hard_failures == 0 ? 0 : 1;
}
