#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fastperm {

enum class VerifyScope { lattice, characters, bounds, covariance, conservative, all };

std::string_view to_string(VerifyScope s);
std::optional<VerifyScope> parse_verify_scope(std::string_view name);

enum class CheckStatus { pass, fail, info };
std::string_view to_string(CheckStatus s);

struct CheckLine {
    std::string suite;
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
};

struct SuiteReport {
    std::vector<CheckLine> lines;
    bool ok() const;
    void add(std::string suite, std::string name, bool passed, std::string detail);
    void info(std::string suite, std::string name, std::string detail);
};

struct SuiteOptions {
    std::uint64_t seed = 20240601;
    unsigned threads = 1;
    int character_max_n = 14;
    int orthogonality_max_n = 10;
    std::uint64_t conservative_trials = 20000;
};

/// Runs the invariant suites for `scope`. Statements that only hold
/// asymptotically are reported as info lines, never as failures.
SuiteReport run_verify(VerifyScope scope, const SuiteOptions& opts = {});

SuiteReport verify_lattice(const SuiteOptions& opts);
SuiteReport verify_characters(const SuiteOptions& opts);
SuiteReport verify_bounds(const SuiteOptions& opts);
SuiteReport verify_covariance(const SuiteOptions& opts);
SuiteReport verify_conservative(const SuiteOptions& opts);

/// Outcome of the conservative-p-value uniformity experiment.
struct UniformityResult {
    std::size_t n = 0;
    std::uint64_t i_max = 0;
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> counts;  // counts[r-1]: returned r / (n (i_max + 1))
    double chi_square = 0.0;
    double critical_value = 0.0;  // at significance 0.001
    double p_value = 0.0;
    /// max over grid alpha of (P(ret <= alpha) - alpha - 3 sqrt(alpha (1 - alpha) / trials)).
    double worst_excess = 0.0;
    bool chi_square_pass = false;
    bool excess_pass = false;
};

/// Null-hypothesis trials with iid Gaussian u and v, trial i on seed stream i.
UniformityResult conservative_uniformity(std::size_t n, std::uint64_t i_max, std::uint64_t trials,
                                         std::uint64_t seed, unsigned threads = 1);

}  // namespace fastperm
