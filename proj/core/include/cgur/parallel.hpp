#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cgur {

// Runs f(i) for i in [0, n) on a pool of jthreads. Each index is visited exactly
// once, so callers writing to slot i of a pre-sized vector get deterministic output.
// The first exception thrown by any worker is rethrown.
template <typename F>
void parallel_for(std::size_t n, F&& f, unsigned max_threads = 0) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (max_threads != 0) hw = std::min(hw, max_threads);
    const std::size_t workers = std::min<std::size_t>(hw, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) {
                    try {
                        f(i);
                    } catch (...) {
                        std::scoped_lock lock(error_mutex);
                        if (!error) error = std::current_exception();
                        return;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

} // namespace cgur
