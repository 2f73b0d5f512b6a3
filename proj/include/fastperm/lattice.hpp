#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fastperm/permutation.hpp"
#include "fastperm/sample_vector.hpp"

namespace fastperm {

inline constexpr std::size_t kLatticeCap = 8;

/// Coordinates of a permutation in the factorial lattice.
///
/// The permutation is written as the word (a_1, ..., a_n) with sigma(a_i) = i,
/// and l_i counts the earlier letters a_j < a_i. With 0-based positions
/// 0 <= code[i] <= i, so the codes enumerate I_1 x ... x I_n.
struct LehmerCode {
    std::vector<int> code;
    friend bool operator==(const LehmerCode&, const LehmerCode&) = default;
};

LehmerCode lehmer_code(const Permutation& sigma);
Permutation from_lehmer_code(const LehmerCode& c);

/// Mixed-radix index of a code in [0, n!).
std::uint64_t code_index(const LehmerCode& c);

/// {sigma : (sigma u) . v >= t}, ascending. u and v must be sorted ascending
/// and n <= 8.
std::vector<Permutation> threshold_set(const SampleVector& u, const SampleVector& v, double t);

/// Upward closure under the componentwise order on Lehmer codes.
bool is_upper_set(std::span<const Permutation> set, std::size_t n);

/// Even-coordinate-sum count minus odd-coordinate-sum count of the codes.
std::int64_t discrepancy(std::span<const Permutation> set);

/// sum of parity(sigma) over the set (the alternating-representation
/// coefficient). Equals (-1)^(n(n-1)/2) * discrepancy.
std::int64_t alternating_sum(std::span<const Permutation> set);

}  // namespace fastperm
