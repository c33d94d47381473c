#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace selberg {

// 0 or negative means "use the hardware count".
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [begin, end) across `threads` workers.  Work is
// claimed through a shared counter, so callers must make the result
// independent of the schedule (write to per-index slots, reduce later).
inline void parallel_for(long long begin, long long end, int threads,
                         const std::function<void(long long)>& fn) {
    threads = resolve_threads(threads);
    long long count = end - begin;
    if (count <= 0) return;
    if (threads == 1 || count == 1) {
        for (long long i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{begin};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            long long i = next.fetch_add(1);
            if (i >= end) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(end);
                return;
            }
        }
    };
    int n = static_cast<int>(std::min<long long>(threads, count));
    pool.reserve(n);
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace selberg
