#include "fastperm/permutation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "fastperm/error.hpp"

namespace fastperm {

namespace {

void require_nonempty(std::size_t n) {
    if (n == 0) throw InvalidSizeError("permutation size must be positive");
    if (n > std::numeric_limits<Permutation::index_type>::max()) {
        throw InvalidSizeError("permutation size exceeds 32-bit index range");
    }
}

}  // namespace

Permutation Permutation::identity(std::size_t n) {
    require_nonempty(n);
    std::vector<index_type> m(n);
    std::iota(m.begin(), m.end(), index_type{0});
    return Permutation(std::move(m));
}

Permutation Permutation::swap(std::size_t n, std::size_t i, std::size_t j) {
    if (i >= n || j >= n) throw InvalidSizeError("swap: index out of range");
    Permutation p = identity(n);
    std::swap(p.map_[i], p.map_[j]);
    return p;
}

Permutation Permutation::rotation(std::size_t n, std::size_t k) {
    require_nonempty(n);
    if (k >= n) throw InvalidSizeError("rotation: shift must satisfy 0 <= k < n");
    std::vector<index_type> m(n);
    for (std::size_t j = 0; j < n; ++j) m[j] = static_cast<index_type>((j + n - k) % n);
    return Permutation(std::move(m));
}

Permutation Permutation::from_mapping(std::vector<index_type> mapping) {
    require_nonempty(mapping.size());
    std::vector<bool> seen(mapping.size(), false);
    for (index_type x : mapping) {
        if (x >= mapping.size() || seen[x]) {
            throw InvalidSizeError("from_mapping: not a bijection on {0..n-1}");
        }
        seen[x] = true;
    }
    return Permutation(std::move(mapping));
}

Permutation Permutation::inverse() const {
    std::vector<index_type> inv(map_.size());
    for (std::size_t j = 0; j < map_.size(); ++j) inv[map_[j]] = static_cast<index_type>(j);
    return Permutation(std::move(inv));
}

int Permutation::parity() const {
    // (-1)^(n - #cycles)
    const std::size_t cycles = cycle_type().size();
    return ((map_.size() - cycles) % 2 == 0) ? 1 : -1;
}

std::vector<std::size_t> Permutation::cycle_type() const {
    std::vector<bool> seen(map_.size(), false);
    std::vector<std::size_t> lengths;
    for (std::size_t start = 0; start < map_.size(); ++start) {
        if (seen[start]) continue;
        std::size_t len = 0;
        for (std::size_t j = start; !seen[j]; j = map_[j]) {
            seen[j] = true;
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.begin(), lengths.end(), std::greater<>());
    return lengths;
}

bool Permutation::is_identity() const {
    for (std::size_t j = 0; j < map_.size(); ++j) {
        if (map_[j] != j) return false;
    }
    return true;
}

void shuffle_in_place(RngStream& rng, Permutation& sigma) {
    auto& m = sigma.map_;
    std::iota(m.begin(), m.end(), Permutation::index_type{0});
    for (std::size_t i = m.size() - 1; i > 0; --i) {
        const std::size_t j = rng.below(i + 1);
        std::swap(m[i], m[j]);
    }
}

void shuffle_values(RngStream& rng, std::span<double> v) {
    for (std::size_t i = v.size(); i-- > 1;) {
        const std::size_t j = rng.below(i + 1);
        std::swap(v[i], v[j]);
    }
}

Permutation uniform_permutation(RngStream& rng, std::size_t n) {
    Permutation p = Permutation::identity(n);
    shuffle_in_place(rng, p);  // n - 1 draws
    return p;
}

Permutation compose(const Permutation& sigma, const Permutation& tau) {
    require_same_length(sigma.size(), tau.size(), "compose");
    std::vector<Permutation::index_type> m(sigma.size());
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = sigma.map_[tau.map_[j]];
    return Permutation(std::move(m));
}

Permutation conjugate(const Permutation& sigma, const Permutation& tau) {
    require_same_length(sigma.size(), tau.size(), "conjugate");
    return compose(tau.inverse(), compose(sigma, tau));
}

void apply_into(const Permutation& sigma, std::span<const double> in, std::span<double> out) {
    const auto m = sigma.mapping();
    for (std::size_t j = 0; j < m.size(); ++j) out[m[j]] = in[j];
}

SampleVector apply(const Permutation& sigma, const SampleVector& v) {
    require_same_length(sigma.size(), v.size(), "apply");
    std::vector<double> out(v.size());
    apply_into(sigma, v.values(), out);
    return SampleVector(std::move(out));
}

SampleVector cyclic_shift_pow(const SampleVector& v, std::size_t k) {
    const std::size_t n = v.size();
    if (k >= n) {
        throw InvalidSizeError("cyclic_shift_pow: shift " + std::to_string(k) + " outside [0, " +
                               std::to_string(n) + ")");
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = v[(j + k) % n];
    return SampleVector(std::move(out));
}

std::vector<double> midranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && v[order[j]] == v[order[i]]) ++j;
        // Positions i..j-1 (0-based) hold ranks i+1..j; their mean is (i+1+j)/2.
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t q = i; q < j; ++q) ranks[order[q]] = r;
        i = j;
    }
    return ranks;
}

SampleVector midranks(const SampleVector& v) {
    return SampleVector(midranks(v.values()));
}

bool has_ties(std::span<const double> v) {
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

}  // namespace fastperm
