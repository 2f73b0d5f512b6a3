#include "fastperm/partitions.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "fastperm/error.hpp"

namespace fastperm {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw InvalidSizeError("partition must have at least one part");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw InvalidSizeError("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1]) throw InvalidSizeError("partition parts must be weakly decreasing");
    }
    size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::row(int n) { return Partition({n}); }
Partition Partition::column(int n) { return Partition(std::vector<int>(static_cast<std::size_t>(n), 1)); }

Partition Partition::conjugate() const {
    std::vector<int> cols(static_cast<std::size_t>(parts_.front()), 0);
    for (int part : parts_) {
        for (int c = 0; c < part; ++c) ++cols[static_cast<std::size_t>(c)];
    }
    return Partition(std::move(cols));
}

std::string Partition::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(parts_[i]);
    }
    return s + ")";
}

CycleType::CycleType(std::vector<int> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty()) throw InvalidSizeError("cycle type must have at least one cycle");
    for (int l : lengths_) {
        if (l <= 0) throw InvalidSizeError("cycle lengths must be positive");
    }
    std::sort(lengths_.begin(), lengths_.end(), std::greater<>());
    size_ = std::accumulate(lengths_.begin(), lengths_.end(), 0);
}

CycleType CycleType::rectangular(int r, int m) {
    if (r <= 0 || m <= 0) throw InvalidSizeError("rectangular class needs positive r and m");
    return CycleType(std::vector<int>(static_cast<std::size_t>(m), r));
}

BigInt CycleType::class_size() const {
    std::map<int, int> mult;
    for (int l : lengths_) ++mult[l];
    BigInt centralizer = 1;
    for (const auto& [a, b] : mult) {
        for (int i = 0; i < b; ++i) centralizer *= a;
        centralizer *= factorial(b);
    }
    return factorial(size_) / centralizer;
}

int CycleType::sign() const {
    int even_cycles = 0;
    for (int l : lengths_) even_cycles += (l % 2 == 0);
    return (even_cycles % 2 == 0) ? 1 : -1;
}

std::string CycleType::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(lengths_[i]);
    }
    return s + "]";
}

BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::vector<Partition> partitions(int n, int cap) {
    if (n < 1) throw InvalidSizeError("partitions: n must be positive");
    if (n > cap) {
        throw CapExceededError("partitions: n = " + std::to_string(n) + " exceeds the enumeration cap " +
                               std::to_string(cap));
    }
    std::vector<Partition> out;
    std::vector<int> current;
    // Largest next part first yields reverse lexicographic order.
    std::function<void(int, int)> extend = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            extend(remaining - part, part);
            current.pop_back();
        }
    };
    extend(n, n);
    return out;
}

BigInt hook_dimension(const Partition& p) {
    const auto& rows = p.parts();
    const auto cols = p.conjugate().parts();
    BigInt hooks = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < rows[i]; ++j) {
            const int arm = rows[i] - j - 1;
            const int leg = cols[static_cast<std::size_t>(j)] - static_cast<int>(i) - 1;
            hooks *= arm + leg + 1;
        }
    }
    const BigInt total = factorial(p.size());
    if (total % hooks != 0) throw InternalConsistencyError("hook product does not divide n!");
    return total / hooks;
}

}  // namespace fastperm
