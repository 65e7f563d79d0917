#pragma once
// Minimal worker pool. Tasks are indexed and must write results only into
// their own pre-sized slot; combined with per-task seeds fixed up front this
// makes every caller's output independent of the worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace playtest {

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    if (n == 0) return;
    if (workers < 1) workers = 1;
    const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (pool <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(body);
    for (auto& t : threads) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace playtest
