#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rvib {

/// Worker count from RVIB_THREADS, else the hardware concurrency (at least 1).
int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Items are claimed
/// dynamically; the first exception thrown is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    const auto n = static_cast<std::size_t>(threads) < count ? static_cast<std::size_t>(threads)
                                                             : count;
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace rvib
