#include "fastperm/characters.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "fastperm/error.hpp"

namespace fastperm {

namespace {

// First-column hook lengths: beta_i = lambda_i + (L - 1 - i), all distinct.
std::vector<int> beta_set(const std::vector<int>& shape) {
    const int len = static_cast<int>(shape.size());
    std::vector<int> beta(shape.size());
    for (int i = 0; i < len; ++i) beta[static_cast<std::size_t>(i)] = shape[static_cast<std::size_t>(i)] + (len - 1 - i);
    return beta;
}

std::vector<int> shape_from_beta(std::vector<int> beta) {
    std::sort(beta.begin(), beta.end(), std::greater<>());
    const int len = static_cast<int>(beta.size());
    std::vector<int> shape;
    for (int i = 0; i < len; ++i) {
        const int part = beta[static_cast<std::size_t>(i)] - (len - 1 - i);
        if (part > 0) shape.push_back(part);
    }
    return shape;
}

}  // namespace

BigInt MnEvaluator::character(const Partition& p, const CycleType& c) {
    if (p.size() != c.size()) {
        throw DimensionError("character: partition of " + std::to_string(p.size()) + " with class of S_" +
                             std::to_string(c.size()));
    }
    if (p.size() > cap_) {
        throw CapExceededError("character: n = " + std::to_string(p.size()) + " exceeds the cap " +
                               std::to_string(cap_));
    }
    return evaluate(p.parts(), c.lengths(), 0);
}

BigInt MnEvaluator::evaluate(const std::vector<int>& shape, const std::vector<int>& cycles, std::size_t next) {
    if (next == cycles.size()) return shape.empty() ? BigInt(1) : BigInt(0);
    std::vector<int> rest(cycles.begin() + static_cast<std::ptrdiff_t>(next), cycles.end());
    auto key = std::make_pair(shape, rest);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int r = cycles[next];
    std::vector<int> beta = beta_set(shape);
    BigInt total = 0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        const int from = beta[i];
        const int to = from - r;
        if (to < 0 || std::find(beta.begin(), beta.end(), to) != beta.end()) continue;
        int between = 0;
        for (int b : beta) between += (b > to && b < from);
        std::vector<int> moved = beta;
        moved[i] = to;
        const BigInt sub = evaluate(shape_from_beta(moved), cycles, next + 1);
        if (between % 2 == 0) {
            total += sub;
        } else {
            total -= sub;
        }
    }
    memo_.emplace(std::move(key), total);
    return total;
}

BigInt mn_character(const Partition& p, const CycleType& c, int cap) {
    MnEvaluator eval(cap);
    return eval.character(p, c);
}

}  // namespace fastperm
