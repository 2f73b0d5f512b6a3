#pragma once

#include <cstdint>
#include <random>

namespace fastperm {

/// Reproducible random stream identified by (seed, stream id).
///
/// Backed by std::mt19937_64 seeded through std::seed_seq; both algorithms are
/// fully specified by the C++ standard, so a given (seed, stream) yields the
/// same sequence with every conforming standard library. Child streams are
/// derived by hashing, which lets parallel batches own independent streams
/// whose contents do not depend on scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Independent stream for sub-task `index` (batch number, repeat number).
    RngStream child(std::uint64_t index) const;

    std::uint64_t next_u64() { return engine_(); }

    /// Integer in [0, bound). Exactly one engine draw per call; the
    /// multiply-shift map has bias at most bound / 2^64.
    std::uint64_t below(std::uint64_t bound);

    /// Double in [0, 1) with 53 random bits.
    double uniform01();

    /// Standard normal variate (Box-Muller; two draws per call).
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to decorrelate derived stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace fastperm
