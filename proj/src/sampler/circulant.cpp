#include "fastperm/circulant.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "fastperm/error.hpp"

namespace fastperm {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW's planner is not thread-safe; execution of an existing plan on fresh
// arrays (new-array execute) is. All buffers come from fftw_malloc, so their
// alignment matches the arrays the plans were created with, and every
// execution is in place like the plan.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    PlanPair get(std::size_t n) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        // In-place transforms on a buffer padded to n / 2 + 1 complex values.
        // They keep a smaller working set, which matters once n leaves cache.
        auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
        const int len = static_cast<int>(n);
        PlanPair p;
        p.forward = fftw_plan_dft_r2c_1d(len, reinterpret_cast<double*>(buf), buf, FFTW_ESTIMATE);
        p.backward = fftw_plan_dft_c2r_1d(len, buf, reinterpret_cast<double*>(buf), FFTW_ESTIMATE);
        fftw_free(buf);
        if (p.forward == nullptr || p.backward == nullptr) {
            throw std::runtime_error("FFTW failed to create a plan for length " + std::to_string(n));
        }
        plans_.emplace(n, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.backward);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, PlanPair> plans_;
};

template <class T>
struct FftwDeleter {
    void operator()(T* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

}  // namespace

struct CirculantCorrelator::Impl {
    std::size_t n;
    std::size_t bins;
    PlanPair plans;
    FftwBuffer<fftw_complex> left;
    FftwBuffer<fftw_complex> right;

    double* left_real() noexcept { return reinterpret_cast<double*>(left.get()); }
    double* right_real() noexcept { return reinterpret_cast<double*>(right.get()); }

    explicit Impl(std::size_t len)
        : n(len),
          bins(len / 2 + 1),
          plans(PlanCache::instance().get(len)),
          left(fftw_buffer<fftw_complex>(len / 2 + 1)),
          right(fftw_buffer<fftw_complex>(len / 2 + 1)) {}
};

CirculantCorrelator::CirculantCorrelator(std::size_t n) {
    if (n < 1) throw InvalidSizeError("CirculantCorrelator: length must be positive");
    if (n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
        throw InvalidSizeError("CirculantCorrelator: length exceeds FFT index range");
    }
    impl_ = std::make_unique<Impl>(n);
}

CirculantCorrelator::~CirculantCorrelator() = default;
CirculantCorrelator::CirculantCorrelator(CirculantCorrelator&&) noexcept = default;
CirculantCorrelator& CirculantCorrelator::operator=(CirculantCorrelator&&) noexcept = default;

std::size_t CirculantCorrelator::size() const noexcept { return impl_->n; }

void CirculantCorrelator::load_right(std::span<const double> v) {
    Impl& m = *impl_;
    std::copy(v.begin(), v.end(), m.right_real());
    fftw_execute_dft_r2c(m.plans.forward, m.right_real(), m.right.get());
}

void CirculantCorrelator::correlate_loaded(std::span<const double> u, std::span<double> out) {
    Impl& m = *impl_;
    std::copy(u.begin(), u.end(), m.left_real());
    fftw_execute_dft_r2c(m.plans.forward, m.left_real(), m.left.get());
    // Cross-correlation: conj(U) * V, then inverse transform (unnormalized).
    for (std::size_t b = 0; b < m.bins; ++b) {
        const double ur = m.left[b][0];
        const double ui = m.left[b][1];
        const double vr = m.right[b][0];
        const double vi = m.right[b][1];
        m.left[b][0] = ur * vr + ui * vi;
        m.left[b][1] = ur * vi - ui * vr;
    }
    fftw_execute_dft_c2r(m.plans.backward, m.left.get(), m.left_real());
    const double scale = 1.0 / static_cast<double>(m.n);
    const double* y = m.left_real();
    for (std::size_t k = 0; k < m.n; ++k) out[k] = y[k] * scale;
}

void CirculantCorrelator::correlate(std::span<const double> u, std::span<const double> v,
                                    std::span<double> out) {
    load_right(v);
    correlate_loaded(u, out);
}

ShiftDotProducts circulant_dots(const SampleVector& u, const SampleVector& v) {
    require_same_length(u.size(), v.size(), "circulant_dots");
    CirculantCorrelator corr(u.size());
    ShiftDotProducts out{std::vector<double>(u.size())};
    corr.correlate(u.values(), v.values(), out.values);
    return out;
}

ShiftDotProducts circulant_dots_direct(std::span<const double> u, std::span<const double> v) {
    require_same_length(u.size(), v.size(), "circulant_dots_direct");
    const std::size_t n = u.size();
    ShiftDotProducts out{std::vector<double>(n, 0.0)};
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += u[j] * v[(j + k) % n];
        out.values[k] = s;
    }
    return out;
}

}  // namespace fastperm
