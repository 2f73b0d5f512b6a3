#include "fastperm/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <span>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastperm/cli/csv.hpp"
#include "fastperm/dot.hpp"
#include "fastperm/error.hpp"
#include "fastperm/sampler.hpp"

namespace fastperm::cli {

namespace {

using Json = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

int emit_error(std::ostream& out, int code, std::string_view kind, const std::string& message,
               std::optional<std::pair<std::size_t, std::size_t>> where = std::nullopt) {
    Json e;
    e["code"] = kind;
    e["exit_status"] = code;
    e["message"] = message;
    if (where) {
        e["row"] = where->first;
        e["column"] = where->second;
    }
    out << Json{{"error", e}}.dump() << '\n';
    return code;
}

unsigned default_threads() {
    if (const char* env = std::getenv(kThreadsEnv)) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

bool is_grouped(TestKind k) { return k == TestKind::mann_whitney || k == TestKind::kruskal_wallis; }

void validate_config(const RunConfig& cfg) {
    AccuracySpec{cfg.epsilon, cfg.delta, cfg.variance_constant}.validate();
    if (cfg.repeats && (*cfg.repeats == 0 || *cfg.repeats % 2 == 0)) {
        throw ConfigError("--repeats must be an odd positive integer");
    }
    if (cfg.threads == 0) throw ConfigError("--threads must be positive");
}

Table load_table(const RunConfig& cfg) {
    const std::size_t numeric = is_grouped(cfg.statistic) ? 1 : 2;
    if (cfg.input == "-") return read_table(std::cin, numeric);
    std::ifstream in(cfg.input);
    if (!in) throw ParseError("cannot open input file '" + cfg.input + "'", 0, 0);
    return read_table(in, numeric);
}

struct Outcome {
    PValueEstimate estimate;
    bool tie_flag = false;
    std::vector<std::string> warnings;
    double wall_ms = 0.0;
};

template <class F>
PValueEstimate timed(double& ms, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    PValueEstimate e = f();
    ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return e;
}

Outcome run_dot_test(const RunConfig& cfg, const TestReduction& red, const RngStream& rng) {
    const AccuracySpec acc{cfg.epsilon, cfg.delta, cfg.variance_constant};
    const EstimatorOptions opts{cfg.threads, EstimatorOptions{}.max_batches, cfg.exact_limit};
    const std::size_t n = red.u.size();
    if (cfg.method == Method::exact && n > cfg.exact_limit) {
        throw ConfigError("method exact requires n <= " + std::to_string(cfg.exact_limit) + ", got " + std::to_string(n));
    }
    Outcome o{.estimate = {}, .tie_flag = red.tie_flag, .warnings = red.warnings};
    o.estimate = timed(o.wall_ms, [&] {
        switch (cfg.method) {
            case Method::fft: return estimate_pvalue_auto(red.u, red.v, red.t, acc, rng, opts);
            case Method::fft_median:
                return estimate_pvalue_median(red.u, red.v, red.t, acc, rng,
                                              cfg.repeats.value_or(median_repeats_for(cfg.delta)), opts);
            case Method::naive: {
                // Same effective sample count as the FFT plan.
                const std::uint64_t m = acc.batch_count(n) * n;
                return naive_mc_pvalue(red.u, red.v, red.t, m, rng);
            }
            case Method::exact: return exact_pvalue(red.u, red.v, red.t, cfg.exact_limit);
            case Method::conservative: return conservative_pvalue(red.u, red.v, cfg.i_max, rng, opts);
        }
        throw ConfigError("unknown method");
    });
    return o;
}

Outcome run_kruskal_wallis(const RunConfig& cfg, const GroupedSample& g, const RngStream& rng) {
    const AccuracySpec acc{cfg.epsilon, cfg.delta, cfg.variance_constant};
    const EstimatorOptions opts{cfg.threads, EstimatorOptions{}.max_batches, cfg.exact_limit};
    const KruskalWallisSetup setup = kruskal_wallis_setup(g);
    if (cfg.method == Method::exact && g.total() > cfg.exact_limit) {
        throw ConfigError("method exact requires N <= " + std::to_string(cfg.exact_limit));
    }
    Outcome o{.estimate = {}, .tie_flag = setup.tie_flag, .warnings = setup.warnings};
    o.estimate = timed(o.wall_ms, [&] {
        switch (cfg.method) {
            case Method::fft: return kruskal_wallis_pvalue(g, acc, rng, opts);
            case Method::fft_median:
                return kruskal_wallis_pvalue_median(g, acc, rng, cfg.repeats.value_or(median_repeats_for(cfg.delta)),
                                                    opts);
            case Method::naive: return kruskal_wallis_naive(g, acc.batch_count(g.total()) * g.total(), rng);
            case Method::exact: return kruskal_wallis_exact(g, cfg.exact_limit);
            case Method::conservative: return kruskal_wallis_conservative(g, cfg.i_max, rng, opts);
        }
        throw ConfigError("unknown method");
    });
    return o;
}

}  // namespace

int cmd_pvalue(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        return emit_error(out, kExitInvalidConfig, "invalid_config", e.what());
    }

    Table table;
    try {
        table = load_table(cfg);
    } catch (const ParseError& e) {
        return emit_error(out, kExitParseError, "parse_error", e.what(), std::make_pair(e.row(), e.column()));
    }

    const std::uint64_t seed = cfg.seed.value_or(entropy_seed());
    if (!cfg.seed) err << "seed: " << seed << '\n';
    const RngStream rng(seed, 0);

    try {
        Outcome o;
        std::size_t n = 0;
        if (cfg.statistic == TestKind::pearson || cfg.statistic == TestKind::spearman) {
            const PairedData d = paired_columns(table);
            if (d.x.size() < 3) throw InvalidSizeError("paired tests need at least 3 rows");
            const SampleVector x(d.x);
            const SampleVector y(d.y);
            const TestReduction red =
                cfg.statistic == TestKind::pearson ? pearson_reduction(x, y) : spearman_reduction(x, y);
            n = red.u.size();
            o = run_dot_test(cfg, red, rng);
        } else {
            const LongData d = long_format(table);
            if (cfg.statistic == TestKind::mann_whitney) {
                if (d.groups.size() != 2) {
                    throw ConfigError("mann-whitney needs exactly 2 groups, found " + std::to_string(d.groups.size()));
                }
                const TestReduction red = mann_whitney_reduction(d.groups[0], d.groups[1]);
                n = red.u.size();
                o = run_dot_test(cfg, red, rng);
            } else {
                GroupedSample g;
                for (const auto& grp : d.groups) {
                    g.values.insert(g.values.end(), grp.begin(), grp.end());
                    g.group_sizes.push_back(grp.size());
                }
                n = g.total();
                o = run_kruskal_wallis(cfg, g, rng);
            }
        }
        for (const auto& w : o.warnings) err << "warning: " << w << '\n';

        Json j;
        j["schema_version"] = kSchemaVersion;
        j["p_estimate"] = o.estimate.estimate;
        j["method"] = to_string(cfg.method);
        j["statistic"] = to_string(cfg.statistic);
        j["n"] = n;
        j["batches"] = o.estimate.batches;
        j["epsilon"] = cfg.epsilon;
        j["delta"] = cfg.delta;
        j["C"] = cfg.variance_constant;
        j["seed"] = seed;
        j["empirical_batch_variance"] = o.estimate.empirical_batch_variance;
        j["tie_flag"] = o.tie_flag;
        j["warnings"] = o.warnings;
        j["wall_time_ms"] = o.wall_ms;
        out << j.dump(2) << '\n';
        return kExitOk;
    } catch (const ParseError& e) {
        return emit_error(out, kExitParseError, "parse_error", e.what(), std::make_pair(e.row(), e.column()));
    } catch (const ConfigError& e) {
        return emit_error(out, kExitInvalidConfig, "invalid_config", e.what());
    } catch (const CapExceededError& e) {
        return emit_error(out, kExitInvalidConfig, "invalid_config", e.what());
    } catch (const DegenerateInputError& e) {
        return emit_error(out, kExitDegenerateInput, "degenerate_input", e.what());
    } catch (const InvalidSizeError& e) {
        return emit_error(out, kExitDegenerateInput, "degenerate_input", e.what());
    } catch (const std::invalid_argument& e) {
        return emit_error(out, kExitParseError, "invalid_input", e.what());
    }
}

std::vector<FftTiming> time_fft_batches(std::span<const std::size_t> sizes, std::uint64_t seed, unsigned min_reps) {
    struct Lane {
        std::vector<double> u, v;
        std::unique_ptr<BatchSampler> sampler;
        double t = 0.0;
        std::size_t per_round = 1;
        std::vector<double> times;
    };
    const RngStream root(seed, 0xbe7c);
    const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
    std::vector<Lane> lanes(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        Lane& l = lanes[i];
        const std::size_t n = sizes[i];
        RngStream data(seed, n);
        l.u.resize(n);
        l.v.resize(n);
        for (double& x : l.u) x = data.normal();
        for (double& x : l.v) x = data.normal();
        l.sampler = std::make_unique<BatchSampler>(l.u, l.v);
        l.t = compensated_dot(l.u, l.v);
        l.per_round = std::max<std::size_t>(1, largest / n);
        l.sampler->run(l.t, root.child(0));  // warm-up
    }

    // Sizes are interleaved round by round so that drift in machine load hits
    // every size alike. Each round does roughly equal work per size.
    double total = 0.0;
    std::uint64_t batch = 1;
    for (std::size_t round = 0; round < min_reps || total < 200.0 * static_cast<double>(sizes.size()); ++round) {
        for (Lane& l : lanes) {
            const auto t0 = std::chrono::steady_clock::now();
            for (std::size_t k = 0; k < l.per_round; ++k) l.sampler->run(l.t, root.child(batch++));
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            l.times.push_back(ms / static_cast<double>(l.per_round));
            total += ms;
        }
        if (round >= 10'000) break;
    }

    std::vector<FftTiming> out(lanes.size());
    for (std::size_t i = 0; i < lanes.size(); ++i) {
        auto& times = lanes[i].times;
        out[i].reps = times.size() * lanes[i].per_round;
        out[i].min_ms = *std::min_element(times.begin(), times.end());
        std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
        out[i].median_ms = times[times.size() / 2];
    }
    return out;
}

FftTiming time_fft_batch(std::size_t n, std::uint64_t seed, unsigned min_reps) {
    const std::size_t sizes[] = {n};
    return time_fft_batches(sizes, seed, min_reps).front();
}

namespace {

BenchRow speed_row(std::size_t n, const FftTiming& ft, std::uint64_t seed, std::uint64_t naive_cap) {
    BenchRow row;
    row.n = n;
    row.fft_batch_ms = ft.min_ms;
    row.fft_batch_median_ms = ft.median_ms;

    RngStream data(seed, n);
    std::vector<double> u(n), v(n);
    for (double& x : u) x = data.normal();
    for (double& x : v) x = data.normal();
    const SampleVector su(u), sv(v);
    const double t = compensated_dot(u, v);
    const std::uint64_t m = (naive_cap == 0) ? n : std::min<std::uint64_t>(n, naive_cap);
    const auto t0 = std::chrono::steady_clock::now();
    naive_mc_pvalue(su, sv, t, m, RngStream(seed, 0x9a17e));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    row.naive_samples_measured = m;
    row.naive_extrapolated = m < n;
    row.naive_ms = ms * static_cast<double>(n) / static_cast<double>(m);
    row.speedup = row.naive_ms / row.fft_batch_median_ms;
    return row;
}

}  // namespace

BenchRow measure_speed(std::size_t n, std::uint64_t seed, unsigned min_reps, std::uint64_t naive_cap) {
    return speed_row(n, time_fft_batch(n, seed, min_reps), seed, naive_cap);
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.sizes.empty()) return emit_error(out, kExitInvalidConfig, "invalid_config", "--sizes is empty");
    for (std::size_t n : cfg.sizes) {
        if (n < 2) return emit_error(out, kExitInvalidConfig, "invalid_config", "sizes must be at least 2");
    }
    err << "bench: timing fft batches\n";
    const std::vector<FftTiming> fft = time_fft_batches(cfg.sizes, cfg.seed, cfg.min_reps);
    Json rows = Json::array();
    std::vector<BenchRow> measured;
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        err << "bench: naive n = " << cfg.sizes[i] << '\n';
        const BenchRow r = speed_row(cfg.sizes[i], fft[i], cfg.seed, cfg.naive_cap);
        measured.push_back(r);
        rows.push_back(Json{{"n", r.n},
                            {"fft_batch_ms", r.fft_batch_ms},
                            {"fft_batch_median_ms", r.fft_batch_median_ms},
                            {"naive_ms", r.naive_ms},
                            {"naive_samples_measured", r.naive_samples_measured},
                            {"naive_extrapolated", r.naive_extrapolated},
                            {"speedup", r.speedup}});
    }
    Json scaling = Json::array();
    for (std::size_t i = 1; i < measured.size(); ++i) {
        scaling.push_back(Json{{"from", measured[i - 1].n},
                               {"to", measured[i].n},
                               {"fft_time_ratio", measured[i].fft_batch_median_ms / measured[i - 1].fft_batch_median_ms}});
    }
    out << Json{{"schema_version", kSchemaVersion}, {"seed", cfg.seed}, {"sizes", rows}, {"scaling", scaling}}.dump(2)
        << '\n';
    return kExitOk;
}

int cmd_verify(VerifyScope scope, const SuiteOptions& opts, std::ostream& out, std::ostream& err) {
    const SuiteReport rep = run_verify(scope, opts);
    Json lines = Json::array();
    Json failures = Json::array();
    for (const auto& l : rep.lines) {
        Json j{{"suite", l.suite}, {"check", l.name}, {"status", to_string(l.status)}, {"detail", l.detail}};
        if (l.status == CheckStatus::fail) failures.push_back(j);
        lines.push_back(std::move(j));
        err << '[' << to_string(l.status) << "] " << l.suite << ": " << l.name << '\n';
    }
    out << Json{{"schema_version", kSchemaVersion},
                {"scope", to_string(scope)},
                {"seed", opts.seed},
                {"ok", rep.ok()},
                {"checks", lines},
                {"failures", failures}}
               .dump(2)
        << '\n';
    return rep.ok() ? kExitOk : kExitVerifyFailed;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Permutation-test p-values with FFT-correlated sampling"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.threads = default_threads();
    std::string method = "fft";
    std::string statistic = "pearson";
    std::uint64_t seed = 0;
    unsigned repeats = 0;
    auto* pv = app.add_subcommand("pvalue", "Compute a permutation-test p-value from CSV/TSV input");
    pv->add_option("--stat", statistic, "pearson | spearman | mann-whitney | kruskal-wallis")->capture_default_str();
    pv->add_option("--method", method, "fft | fft-median | naive | exact | conservative")->capture_default_str();
    pv->add_option("--epsilon", cfg.epsilon, "Relative accuracy: error <= epsilon * sqrt(p)")->capture_default_str();
    pv->add_option("--delta", cfg.delta, "Failure probability")->capture_default_str();
    pv->add_option("--C", cfg.variance_constant, "Variance constant in the batch count")->capture_default_str();
    auto* seed_opt = pv->add_option("--seed", seed, "Random seed (drawn from entropy and printed if absent)");
    pv->add_option("--i-max", cfg.i_max, "Ordinary batches for the conservative method")->capture_default_str();
    auto* rep_opt = pv->add_option("--repeats", repeats, "Odd repeat count for fft-median");
    pv->add_option("--input", cfg.input, "Input path, '-' for standard input")->capture_default_str();
    pv->add_option("--threads", cfg.threads, std::string("Worker threads (default from ") + kThreadsEnv + ")");
    pv->add_option("--exact-limit", cfg.exact_limit, "Largest n for full enumeration")->capture_default_str();

    BenchConfig bench;
    std::string sizes = "4096,16384,65536";
    auto* bn = app.add_subcommand("bench", "Time one FFT batch against n naive samples");
    bn->add_option("--sizes", sizes, "Comma-separated vector lengths")->capture_default_str();
    bn->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
    bn->add_option("--reps", bench.min_reps, "Minimum timed FFT batches per size")->capture_default_str();
    bn->add_option("--naive-cap", bench.naive_cap, "Time at most this many naive samples and scale (0 = all)")
        ->capture_default_str();

    std::string scope = "all";
    SuiteOptions sopts;
    sopts.threads = cfg.threads;
    auto* vf = app.add_subcommand("verify", "Run the numerical invariant suites");
    vf->add_option("--scope", scope, "lattice | characters | bounds | covariance | conservative | all")
        ->capture_default_str();
    vf->add_option("--seed", sopts.seed, "Random seed for Monte Carlo suites")->capture_default_str();
    vf->add_option("--threads", sopts.threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return emit_error(out, kExitInvalidConfig, "invalid_config", e.what());
    }

    if (pv->parsed()) {
        const auto m = parse_method(method);
        if (!m) return emit_error(out, kExitInvalidConfig, "invalid_config", "unknown method '" + method + "'");
        const auto s = parse_test_kind(statistic);
        if (!s) return emit_error(out, kExitInvalidConfig, "invalid_config", "unknown statistic '" + statistic + "'");
        cfg.method = *m;
        cfg.statistic = *s;
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (rep_opt->count() > 0) cfg.repeats = repeats;
        return cmd_pvalue(cfg, out, err);
    }
    if (bn->parsed()) {
        bench.sizes.clear();
        std::stringstream ss(sizes);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double v = 0.0;
            if (!parse_real(item, v) || v < 2 || v != std::floor(v)) {
                return emit_error(out, kExitInvalidConfig, "invalid_config", "bad size '" + item + "'");
            }
            bench.sizes.push_back(static_cast<std::size_t>(v));
        }
        return cmd_bench(bench, out, err);
    }
    const auto sc = parse_verify_scope(scope);
    if (!sc) return emit_error(out, kExitInvalidConfig, "invalid_config", "unknown scope '" + scope + "'");
    return cmd_verify(*sc, sopts, out, err);
}

}  // namespace fastperm::cli
