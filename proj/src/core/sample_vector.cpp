#include "fastperm/sample_vector.hpp"

#include <cmath>
#include <string>

#include "fastperm/error.hpp"

namespace fastperm {

void require_finite(std::span<const double> v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw NonFiniteError(std::string(what) + ": non-finite entry at index " + std::to_string(i));
        }
    }
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

SampleVector::SampleVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) {
        throw InvalidSizeError("SampleVector: length must be at least 2, got " +
                               std::to_string(entries_.size()));
    }
    require_finite(entries_, "SampleVector");
}

SampleVector::SampleVector(std::initializer_list<double> entries)
    : SampleVector(std::vector<double>(entries)) {}

}  // namespace fastperm
