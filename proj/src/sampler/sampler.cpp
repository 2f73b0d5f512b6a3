#include "fastperm/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "fastperm/dot.hpp"
#include "fastperm/error.hpp"

namespace fastperm {

double guard_band(double norm_u, double norm_v, double t) noexcept {
    return 1e-9 * (norm_u * norm_v + std::fabs(t));
}

BatchSampler::BatchSampler(std::span<const double> u, std::span<const double> v)
    : u_(u.begin(), u.end()),
      v_(v.begin(), v.end()),
      norm_u_(norm2(u)),
      norm_v_(norm2(v)),
      correlator_(u.size()),
      u_perm_(u.size()),
      v_perm_(u.size()),
      y_(u.size()) {
    require_same_length(u.size(), v.size(), "BatchSampler");
}

std::size_t BatchSampler::count_at_least(std::span<const double> u_perm, std::span<const double> v_perm,
                                         double t, std::size_t& near_threshold) {
    correlator_.correlate(u_perm, v_perm, y_);
    const double band = guard_band(norm_u_, norm_v_, t);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < y_.size(); ++k) {
        if (std::fabs(y_[k] - t) <= band) {
            y_[k] = compensated_shift_dot(u_perm, v_perm, k);
            ++near_threshold;
        }
        if (y_[k] >= t) ++hits;
    }
    return hits;
}

BatchResult BatchSampler::run(double t, const RngStream& batch_stream) {
    RngStream s1 = batch_stream.child(1);
    RngStream s2 = batch_stream.child(2);
    // Shuffling the values directly skips the index array and the scatter pass.
    std::copy(u_.begin(), u_.end(), u_perm_.begin());
    std::copy(v_.begin(), v_.end(), v_perm_.begin());
    shuffle_values(s1, u_perm_);
    shuffle_values(s2, v_perm_);

    BatchResult r;
    r.sigma1_seedpath = id_of(s1);
    r.sigma2_seedpath = id_of(s2);
    r.hits = count_at_least(u_perm_, v_perm_, t, r.near_threshold_count);
    r.mean_indicator = static_cast<double>(r.hits) / static_cast<double>(size());
    return r;
}

BatchResult batch_indicator_mean(const SampleVector& u, const SampleVector& v, double t,
                                 const RngStream& rng) {
    require_same_length(u.size(), v.size(), "batch_indicator_mean");
    if (!std::isfinite(t)) throw NonFiniteError("batch_indicator_mean: threshold must be finite");
    BatchSampler sampler(u.values(), v.values());
    return sampler.run(t, rng);
}

}  // namespace fastperm
