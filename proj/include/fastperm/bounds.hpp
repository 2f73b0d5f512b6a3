#pragma once

#include <optional>
#include <vector>

#include "fastperm/characters.hpp"
#include "fastperm/partitions.hpp"

namespace fastperm {

/// max over p outside {(n), (1^n)} of |chi_p([r^(n/r)])| / d_p.
struct CharacterRatioReport {
    int n = 0;
    int r = 0;
    BigRational ratio{0};
    std::optional<Partition> argmax;
    /// 3/n for r >= 4, 3/sqrt(n) for r = 2, 3 (asymptotic reference only).
    double reference_bound = 0.0;
};

/// Throws std::invalid_argument unless r > 1 divides n.
CharacterRatioReport character_ratio_max(int n, int r, int cap = kCharacterCap);

struct FominLulovEntry {
    Partition partition;
    BigInt character;
    BigInt dimension;
    bool holds = false;
    /// bound / |chi|; +inf when chi = 0.
    double slack = 0.0;
};

/// |chi_p([r^m])| <= (m! r^m / (mr)!^(1/r)) d_p^(1/r), checked exactly as
/// |chi|^r (mr)! <= (m! r^m)^r d_p for every partition of n = m r.
struct FominLulovReport {
    int n = 0;
    int r = 0;
    std::vector<FominLulovEntry> entries;
    bool all_hold = true;
    std::optional<Partition> tightest;
    double tightest_slack = 0.0;
};

/// Throws std::invalid_argument unless r >= 1 divides n.
FominLulovReport fomin_lulov_check(int n, int r, int cap = kCharacterCap);

struct DimensionEntry {
    Partition partition;
    BigInt dimension;
    bool exceeds_threshold = false;  // d > n^2 / 3
};

/// Hook dimensions outside the exceptional set {(n), (1^n), (n-1,1), (2,1^(n-2))}.
struct DimensionReport {
    int n = 0;
    BigInt plancherel_sum;  // sum of d^2 over all partitions, equals n!
    std::vector<Partition> exceptional;
    std::vector<BigInt> exceptional_dimensions;
    std::vector<DimensionEntry> entries;
    std::optional<Partition> min_partition;
    BigInt min_dimension{0};
    bool all_exceed = true;
};

/// Throws InternalConsistencyError if the Plancherel identity fails.
DimensionReport dim_bound_report(int n, int cap = kPartitionEnumerationCap);

}  // namespace fastperm
