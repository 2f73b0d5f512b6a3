#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fastperm/rng.hpp"
#include "fastperm/sample_vector.hpp"

namespace fastperm {

/// Bijection on {0..n-1}; mapping()[j] is the image of j.
///
/// Action on vectors: (sigma v)[sigma(j)] = v[j]. With this convention
/// apply(sigma, apply(tau, v)) == apply(compose(sigma, tau), v).
class Permutation {
public:
    using index_type = std::uint32_t;

    static Permutation identity(std::size_t n);
    /// Transposition of i and j.
    static Permutation swap(std::size_t n, std::size_t i, std::size_t j);
    /// Permutation whose action is cyclic_shift_pow(., k): j -> (j - k) mod n.
    static Permutation rotation(std::size_t n, std::size_t k);
    /// Throws InvalidSizeError unless `mapping` is a bijection on {0..n-1}.
    static Permutation from_mapping(std::vector<index_type> mapping);

    std::size_t size() const noexcept { return map_.size(); }
    index_type operator()(std::size_t j) const { return map_[j]; }
    std::span<const index_type> mapping() const noexcept { return map_; }

    Permutation inverse() const;
    /// +1 or -1.
    int parity() const;
    /// Cycle lengths, sorted descending.
    std::vector<std::size_t> cycle_type() const;
    bool is_identity() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    explicit Permutation(std::vector<index_type> mapping) : map_(std::move(mapping)) {}
    friend void shuffle_in_place(RngStream&, Permutation&);
    friend Permutation compose(const Permutation&, const Permutation&);

    std::vector<index_type> map_;
};

/// Uniform draw from S_n by Fisher-Yates; consumes exactly n - 1 draws.
Permutation uniform_permutation(RngStream& rng, std::size_t n);

/// Overwrite `sigma` with uniform_permutation(rng, sigma.size()) without
/// reallocating. The result depends only on the stream, not on the old value.
void shuffle_in_place(RngStream& rng, Permutation& sigma);

/// Fisher-Yates on the values themselves: a uniform relabelling of v using the
/// same n - 1 draws as shuffle_in_place.
void shuffle_values(RngStream& rng, std::span<double> v);

/// (sigma o tau)(j) = sigma(tau(j)).
Permutation compose(const Permutation& sigma, const Permutation& tau);

/// tau^-1 o sigma o tau.
Permutation conjugate(const Permutation& sigma, const Permutation& tau);

SampleVector apply(const Permutation& sigma, const SampleVector& v);
/// Span form of apply for hot loops: out[sigma(j)] = in[j].
void apply_into(const Permutation& sigma, std::span<const double> in, std::span<double> out);

/// result[j] = v[(j + k) mod n]; rejects k >= n.
SampleVector cyclic_shift_pow(const SampleVector& v, std::size_t k);

/// Average 1-based ranks; tied entries share the mean of the ranks they span.
std::vector<double> midranks(std::span<const double> v);
SampleVector midranks(const SampleVector& v);
bool has_ties(std::span<const double> v);

}  // namespace fastperm
