#include "fastperm/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fastperm/dot.hpp"
#include "fastperm/error.hpp"

namespace fastperm {

namespace {

void require_lattice_size(std::size_t n, const char* what) {
    if (n > kLatticeCap) {
        throw CapExceededError(std::string(what) + ": n = " + std::to_string(n) + " exceeds the cap " +
                               std::to_string(kLatticeCap));
    }
}

std::uint64_t factorial_u64(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

LehmerCode lehmer_code(const Permutation& sigma) {
    const std::size_t n = sigma.size();
    // word[i] = a_i = sigma^-1(i)
    const Permutation word = sigma.inverse();
    LehmerCode c;
    c.code.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int smaller = 0;
        for (std::size_t j = 0; j < i; ++j) smaller += (word(j) < word(i));
        c.code[i] = smaller;
    }
    return c;
}

Permutation from_lehmer_code(const LehmerCode& c) {
    const std::size_t n = c.code.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (c.code[i] < 0 || static_cast<std::size_t>(c.code[i]) > i) {
            throw InvalidSizeError("lehmer code entry out of range at position " + std::to_string(i));
        }
    }
    // Walking right to left, a_i is the (code[i])-th smallest unused letter.
    std::vector<Permutation::index_type> remaining(n);
    std::iota(remaining.begin(), remaining.end(), Permutation::index_type{0});
    std::vector<Permutation::index_type> word(n);
    for (std::size_t i = n; i-- > 0;) {
        const auto pos = remaining.begin() + c.code[i];
        word[i] = *pos;
        remaining.erase(pos);
    }
    return Permutation::from_mapping(std::move(word)).inverse();
}

std::uint64_t code_index(const LehmerCode& c) {
    std::uint64_t idx = 0;
    for (std::size_t i = c.code.size(); i-- > 0;) idx = idx * (i + 1) + static_cast<std::uint64_t>(c.code[i]);
    return idx;
}

std::vector<Permutation> threshold_set(const SampleVector& u, const SampleVector& v, double t) {
    require_same_length(u.size(), v.size(), "threshold_set");
    const std::size_t n = u.size();
    require_lattice_size(n, "threshold_set");
    if (!std::is_sorted(u.begin(), u.end()) || !std::is_sorted(v.begin(), v.end())) {
        throw std::invalid_argument("threshold_set: u and v must be sorted ascending");
    }
    std::vector<Permutation::index_type> map(n);
    std::iota(map.begin(), map.end(), Permutation::index_type{0});
    std::vector<double> gathered(n);
    std::vector<Permutation> out;
    do {
        for (std::size_t j = 0; j < n; ++j) gathered[j] = v[map[j]];
        if (compensated_dot(u.values(), gathered) >= t) out.push_back(Permutation::from_mapping(map));
    } while (std::next_permutation(map.begin(), map.end()));
    return out;
}

bool is_upper_set(std::span<const Permutation> set, std::size_t n) {
    require_lattice_size(n, "is_upper_set");
    std::vector<bool> member(factorial_u64(n), false);
    std::vector<LehmerCode> codes;
    codes.reserve(set.size());
    for (const Permutation& p : set) {
        require_same_length(p.size(), n, "is_upper_set");
        codes.push_back(lehmer_code(p));
        member[code_index(codes.back())] = true;
    }
    // Covering steps of the product order raise one coordinate by one.
    for (LehmerCode c : codes) {
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<std::size_t>(c.code[i]) == i) continue;
            ++c.code[i];
            const bool ok = member[code_index(c)];
            --c.code[i];
            if (!ok) return false;
        }
    }
    return true;
}

std::int64_t discrepancy(std::span<const Permutation> set) {
    std::int64_t d = 0;
    for (const Permutation& p : set) {
        const LehmerCode c = lehmer_code(p);
        const int sum = std::accumulate(c.code.begin(), c.code.end(), 0);
        d += (sum % 2 == 0) ? 1 : -1;
    }
    return d;
}

std::int64_t alternating_sum(std::span<const Permutation> set) {
    std::int64_t s = 0;
    for (const Permutation& p : set) s += p.parity();
    return s;
}

}  // namespace fastperm
