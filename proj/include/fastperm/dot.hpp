#pragma once

#include <span>

namespace fastperm {

double plain_dot(std::span<const double> a, std::span<const double> b);

/// Dot product in twice-working precision (error-free TwoProduct via fma and
/// TwoSum accumulation), rounded once. Used wherever a value is compared
/// against a threshold.
double compensated_dot(std::span<const double> a, std::span<const double> b);

double norm2(std::span<const double> a);

}  // namespace fastperm

namespace fastperm {

/// compensated_dot(a, rotate(b, k)) without materializing the rotation:
/// sum_j a[j] * b[(j + k) mod n].
double compensated_shift_dot(std::span<const double> a, std::span<const double> b, std::size_t k);

}  // namespace fastperm
