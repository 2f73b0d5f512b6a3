#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fastperm::detail {

// Runs body(worker, index) for index in [0, count). Worker w owns a contiguous
// block, so per-worker state (FFT buffers) is never shared. Output placement
// by index keeps reductions independent of the thread count.
template <class MakeState, class Body>
void parallel_indexed(std::uint64_t count, unsigned threads, MakeState make_state, Body body) {
    const unsigned workers =
        static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, count)));
    if (workers == 1) {
        auto state = make_state();
        for (std::uint64_t i = 0; i < count; ++i) body(state, i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = count * w / workers;
        const std::uint64_t end = count * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                auto state = make_state();
                for (std::uint64_t i = begin; i < end; ++i) body(state, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace fastperm::detail
