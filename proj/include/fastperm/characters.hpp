#pragma once

#include <map>
#include <utility>
#include <vector>

#include "fastperm/partitions.hpp"

namespace fastperm {

inline constexpr int kCharacterCap = 14;

/// Murnaghan-Nakayama evaluation of irreducible characters of S_n.
///
/// Removes border strips through the beta-set (abacus) encoding of the
/// diagram and memoizes intermediate (shape, remaining cycles) values. The
/// cache belongs to the instance; share an instance only within one thread.
class MnEvaluator {
public:
    explicit MnEvaluator(int cap = kCharacterCap) : cap_(cap) {}

    /// chi_p evaluated on class c. Throws DimensionError if |p| != |c|,
    /// CapExceededError if n exceeds the cap.
    BigInt character(const Partition& p, const CycleType& c);

private:
    BigInt evaluate(const std::vector<int>& shape, const std::vector<int>& cycles, std::size_t next);

    int cap_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, BigInt> memo_;
};

BigInt mn_character(const Partition& p, const CycleType& c, int cap = kCharacterCap);

}  // namespace fastperm
