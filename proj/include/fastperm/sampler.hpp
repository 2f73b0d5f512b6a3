#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fastperm/circulant.hpp"
#include "fastperm/permutation.hpp"
#include "fastperm/rng.hpp"
#include "fastperm/sample_vector.hpp"

namespace fastperm {

struct StreamId {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    friend bool operator==(const StreamId&, const StreamId&) = default;
};

inline StreamId id_of(const RngStream& s) { return {s.seed(), s.stream()}; }

/// One batch: n correlated indicator samples from a single (sigma1, sigma2) draw.
struct BatchResult {
    double mean_indicator = 0.0;
    std::size_t hits = 0;  // mean_indicator * n
    std::size_t near_threshold_count = 0;
    StreamId sigma1_seedpath;
    StreamId sigma2_seedpath;
};

/// Half-width of the band around t inside which FFT shift products are
/// recomputed in compensated arithmetic before the >= t comparison.
double guard_band(double norm_u, double norm_v, double t) noexcept;

/// Reusable workspace for repeated batches over fixed (u, v).
///
/// sigma1 is drawn from stream.child(1) and sigma2 from stream.child(2) of the
/// batch stream. Not safe for concurrent use.
class BatchSampler {
public:
    BatchSampler(std::span<const double> u, std::span<const double> v);

    std::size_t size() const noexcept { return u_.size(); }

    BatchResult run(double t, const RngStream& batch_stream);

    /// Shift products y_k of the most recent run (after guard-band refinement).
    std::span<const double> shift_products() const noexcept { return y_; }

    /// Count of y_k >= t over the shift products of explicitly relabelled
    /// vectors (already permuted by the caller). Refines borderline values.
    std::size_t count_at_least(std::span<const double> u_perm, std::span<const double> v_perm, double t,
                               std::size_t& near_threshold);

private:
    std::vector<double> u_;
    std::vector<double> v_;
    double norm_u_;
    double norm_v_;
    CirculantCorrelator correlator_;
    std::vector<double> u_perm_;
    std::vector<double> v_perm_;
    std::vector<double> y_;
};

/// Throws DimensionError / NonFiniteError on bad input.
BatchResult batch_indicator_mean(const SampleVector& u, const SampleVector& v, double t,
                                 const RngStream& rng);

}  // namespace fastperm
