#include "fastperm/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/number.hpp>

#include "fastperm/error.hpp"

namespace fastperm {

namespace {

void require_divisor(int n, int r) {
    if (r <= 1 || n <= 0 || n % r != 0) {
        throw std::invalid_argument("r = " + std::to_string(r) + " must exceed 1 and divide n = " + std::to_string(n));
    }
}

double log_big(const BigInt& x) {
    // Safe for values far beyond double range: split off powers of two.
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    const unsigned bits = boost::multiprecision::msb(x);
    if (bits < 1000) return std::log(x.convert_to<double>());
    const unsigned shift = bits - 60;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

BigInt power(const BigInt& base, int e) {
    BigInt out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

}  // namespace

CharacterRatioReport character_ratio_max(int n, int r, int cap) {
    require_divisor(n, r);
    CharacterRatioReport rep;
    rep.n = n;
    rep.r = r;
    rep.reference_bound = (r >= 4) ? 3.0 / n : 3.0 / std::sqrt(static_cast<double>(n));
    const CycleType cls = CycleType::rectangular(r, n / r);
    const Partition trivial = Partition::row(n);
    const Partition alternating = Partition::column(n);
    MnEvaluator eval(cap);
    for (const Partition& p : partitions(n)) {
        if (p == trivial || p == alternating) continue;
        const BigInt chi = abs(eval.character(p, cls));
        const BigRational ratio(chi, hook_dimension(p));
        if (!rep.argmax || ratio > rep.ratio) {
            rep.ratio = ratio;
            rep.argmax = p;
        }
    }
    return rep;
}

FominLulovReport fomin_lulov_check(int n, int r, int cap) {
    // r = 1 (identity class) is allowed here; the bound is then an equality.
    if (r < 1 || n <= 0 || n % r != 0) {
        throw std::invalid_argument("r = " + std::to_string(r) + " must divide n = " + std::to_string(n));
    }
    const int m = n / r;
    FominLulovReport rep;
    rep.n = n;
    rep.r = r;
    const CycleType cls = CycleType::rectangular(r, m);
    const BigInt mfact_rm = factorial(m) * power(BigInt(r), m);
    const BigInt lhs_scale = factorial(n);        // (mr)!
    const BigInt rhs_scale = power(mfact_rm, r);  // (m! r^m)^r
    const double log_coeff = log_big(mfact_rm) - log_big(lhs_scale) / r;

    MnEvaluator eval(cap);
    for (const Partition& p : partitions(n)) {
        FominLulovEntry e{p, eval.character(p, cls), hook_dimension(p), false, 0.0};
        const BigInt a = abs(e.character);
        e.holds = power(a, r) * lhs_scale <= rhs_scale * e.dimension;
        if (a == 0) {
            e.slack = std::numeric_limits<double>::infinity();
        } else {
            e.slack = std::exp(log_coeff + log_big(e.dimension) / r - log_big(a));
        }
        rep.all_hold = rep.all_hold && e.holds;
        if (!rep.tightest || e.slack < rep.tightest_slack) {
            rep.tightest = p;
            rep.tightest_slack = e.slack;
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

DimensionReport dim_bound_report(int n, int cap) {
    DimensionReport rep;
    rep.n = n;
    const auto all = partitions(n, cap);
    std::vector<Partition> exceptional{Partition::row(n), Partition::column(n)};
    if (n >= 2) {
        exceptional.emplace_back(std::vector<int>{n - 1, 1});
        exceptional.push_back(exceptional.back().conjugate());
    }
    std::sort(exceptional.begin(), exceptional.end(), std::greater<>());
    exceptional.erase(std::unique(exceptional.begin(), exceptional.end()), exceptional.end());
    rep.exceptional = exceptional;

    // d > n^2 / 3  <=>  3 d > n^2
    const BigInt n_sq = BigInt(n) * n;
    for (const Partition& p : all) {
        const BigInt d = hook_dimension(p);
        rep.plancherel_sum += d * d;
        if (std::find(exceptional.begin(), exceptional.end(), p) != exceptional.end()) continue;
        DimensionEntry e{p, d, 3 * d > n_sq};
        rep.all_exceed = rep.all_exceed && e.exceeds_threshold;
        if (!rep.min_partition || d < rep.min_dimension) {
            rep.min_partition = p;
            rep.min_dimension = d;
        }
        rep.entries.push_back(std::move(e));
    }
    if (rep.plancherel_sum != factorial(n)) {
        throw InternalConsistencyError("Plancherel identity failed at n = " + std::to_string(n));
    }
    for (const Partition& p : exceptional) rep.exceptional_dimensions.push_back(hook_dimension(p));
    return rep;
}

}  // namespace fastperm
