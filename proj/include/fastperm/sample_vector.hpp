#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fastperm {

/// Real data vector of length n >= 2 with finite entries.
class SampleVector {
public:
    explicit SampleVector(std::vector<double> entries);
    SampleVector(std::initializer_list<double> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> values() const noexcept { return entries_; }
    const std::vector<double>& vector() const noexcept { return entries_; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    friend bool operator==(const SampleVector&, const SampleVector&) = default;

private:
    std::vector<double> entries_;
};

void require_finite(std::span<const double> v, const char* what);
void require_same_length(std::size_t a, std::size_t b, const char* what);

}  // namespace fastperm
