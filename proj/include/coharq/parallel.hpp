#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coharq {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Work is handed out
/// in fixed-size chunks; callers write results by index so the outcome never
/// depends on scheduling. The first exception thrown is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn, std::size_t chunk = 64) {
    workers = std::max(1u, workers);
    if (workers == 1 || n <= chunk) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        try {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n) return;
                const std::size_t end = std::min(n, begin + chunk);
                for (std::size_t i = begin; i < end; ++i) fn(i);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(n);
        }
    };
    std::vector<std::jthread> pool;
    const unsigned spawned = static_cast<unsigned>(std::min<std::size_t>(workers, (n + chunk - 1) / chunk));
    for (unsigned w = 1; w < spawned; ++w) pool.emplace_back(body);
    body();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

inline unsigned hardware_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace coharq
