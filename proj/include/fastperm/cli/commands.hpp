#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <span>
#include <vector>

#include "fastperm/adapters.hpp"
#include "fastperm/estimators.hpp"
#include "fastperm/suites.hpp"

namespace fastperm::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitParseError = 1,
    kExitInvalidConfig = 2,
    kExitDegenerateInput = 3,
    kExitVerifyFailed = 4,
};

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kThreadsEnv = "FASTPERM_THREADS";

struct RunConfig {
    Method method = Method::fft;
    TestKind statistic = TestKind::pearson;
    double epsilon = 0.05;
    double delta = 0.05;
    double variance_constant = 2.0;
    std::optional<std::uint64_t> seed;
    std::uint64_t i_max = 99;
    std::optional<unsigned> repeats;
    std::string input = "-";  // "-" reads standard input
    unsigned threads = 1;
    std::size_t exact_limit = 10;
};

/// Writes one JSON object to `out` (result or error) and returns the exit code.
int cmd_pvalue(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct BenchConfig {
    std::vector<std::size_t> sizes{4096, 16384, 65536};
    std::uint64_t seed = 1;
    unsigned min_reps = 7;
    /// Measure at most this many naive samples and scale linearly; 0 = all n.
    std::uint64_t naive_cap = 0;
};

struct FftTiming {
    double min_ms = 0.0;
    double median_ms = 0.0;
    std::size_t reps = 0;
};

struct BenchRow {
    std::size_t n = 0;
    double fft_batch_ms = 0.0;  // fastest repetition
    double fft_batch_median_ms = 0.0;
    double naive_ms = 0.0;      // n independent naive samples
    std::uint64_t naive_samples_measured = 0;
    bool naive_extrapolated = false;
    double speedup = 0.0;
};

/// Per-batch timings for several sizes measured in interleaved rounds, with
/// roughly equal work per size in each round.
std::vector<FftTiming> time_fft_batches(std::span<const std::size_t> sizes, std::uint64_t seed, unsigned min_reps);

/// Wall time of one FFT batch (n correlated samples) on Gaussian data, over
/// at least `min_reps` repetitions and at least 200 ms in total.
FftTiming time_fft_batch(std::size_t n, std::uint64_t seed, unsigned min_reps);
BenchRow measure_speed(std::size_t n, std::uint64_t seed, unsigned min_reps, std::uint64_t naive_cap);

int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_verify(VerifyScope scope, const SuiteOptions& opts, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fastperm::cli
