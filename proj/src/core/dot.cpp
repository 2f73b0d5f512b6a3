#include "fastperm/dot.hpp"

#include <cmath>

namespace fastperm {

double plain_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Ogita, Rump and Oishi's Dot2.
double compensated_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double p = a[i] * b[i];
        const double perr = std::fma(a[i], b[i], -p);
        const double t = s + p;
        const double z = t - s;
        const double serr = (s - (t - z)) + (p - z);
        s = t;
        c += perr + serr;
    }
    return s + c;
}

double norm2(std::span<const double> a) {
    double scale = 0.0;
    for (double x : a) scale = std::fmax(scale, std::fabs(x));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : a) {
        const double y = x / scale;
        s += y * y;
    }
    return scale * std::sqrt(s);
}

}  // namespace fastperm

namespace fastperm {

double compensated_shift_dot(std::span<const double> a, std::span<const double> b, std::size_t k) {
    const std::size_t n = a.size();
    const std::size_t head = n - k;
    double s = 0.0;
    double c = 0.0;
    auto accumulate = [&](double x, double y) {
        const double p = x * y;
        const double perr = std::fma(x, y, -p);
        const double t = s + p;
        const double z = t - s;
        c += perr + ((s - (t - z)) + (p - z));
        s = t;
    };
    for (std::size_t j = 0; j < head; ++j) accumulate(a[j], b[j + k]);
    for (std::size_t j = head; j < n; ++j) accumulate(a[j], b[j - head]);
    return s + c;
}

}  // namespace fastperm
