#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fastperm/sample_vector.hpp"

namespace fastperm {

/// The n shift products y_k = u . (lambda^k v), k = 0..n-1.
struct ShiftDotProducts {
    std::vector<double> values;
    std::size_t size() const noexcept { return values.size(); }
};

/// Exact-length circular cross-correlation through real FFTs.
///
/// Owns the transform buffers for one length n. Not safe for concurrent use;
/// give each worker its own instance. Plans come from a process-wide cache.
class CirculantCorrelator {
public:
    explicit CirculantCorrelator(std::size_t n);
    ~CirculantCorrelator();
    CirculantCorrelator(CirculantCorrelator&&) noexcept;
    CirculantCorrelator& operator=(CirculantCorrelator&&) noexcept;
    CirculantCorrelator(const CirculantCorrelator&) = delete;
    CirculantCorrelator& operator=(const CirculantCorrelator&) = delete;

    std::size_t size() const noexcept;

    /// out[k] = sum_j u[j] * v[(j + k) mod n].
    void correlate(std::span<const double> u, std::span<const double> v, std::span<double> out);

    /// Two-step form for several left vectors against one right vector:
    /// load_right(v) once, then correlate_loaded(u_i, out_i) per u_i.
    void load_right(std::span<const double> v);
    void correlate_loaded(std::span<const double> u, std::span<double> out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Throws DimensionError on length mismatch, NonFiniteError on NaN/inf.
ShiftDotProducts circulant_dots(const SampleVector& u, const SampleVector& v);

/// Direct O(n^2) evaluation, kept as the reference route.
ShiftDotProducts circulant_dots_direct(std::span<const double> u, std::span<const double> v);

}  // namespace fastperm
