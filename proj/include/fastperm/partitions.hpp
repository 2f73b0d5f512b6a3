#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fastperm {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Partition of n (Young diagram), parts weakly decreasing and positive.
class Partition {
public:
    explicit Partition(std::vector<int> parts);

    static Partition row(int n);     // (n)
    static Partition column(int n);  // (1^n)

    int size() const noexcept { return size_; }
    const std::vector<int>& parts() const noexcept { return parts_; }
    std::size_t length() const noexcept { return parts_.size(); }

    /// Transpose of the diagram.
    Partition conjugate() const;

    std::string to_string() const;

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
    int size_ = 0;
};

/// Conjugacy class of S_n given by its cycle lengths (stored descending).
class CycleType {
public:
    explicit CycleType(std::vector<int> lengths);
    /// [r^m]: m cycles of length r.
    static CycleType rectangular(int r, int m);

    int size() const noexcept { return size_; }
    const std::vector<int>& lengths() const noexcept { return lengths_; }

    /// n! / prod_a (a^{b_a} b_a!), b_a = number of cycles of length a.
    BigInt class_size() const;
    /// +1 for even permutations.
    int sign() const;

    std::string to_string() const;

    friend bool operator==(const CycleType&, const CycleType&) = default;
    friend auto operator<=>(const CycleType&, const CycleType&) = default;

private:
    std::vector<int> lengths_;
    int size_ = 0;
};

inline constexpr int kPartitionEnumerationCap = 40;

/// All partitions of n in reverse lexicographic order: (n), (n-1,1), ...,
/// (1^n). Throws CapExceededError above `cap`.
std::vector<Partition> partitions(int n, int cap = kPartitionEnumerationCap);

BigInt factorial(int n);

/// n! / product of hook lengths, exact.
BigInt hook_dimension(const Partition& p);

}  // namespace fastperm
