#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace trendlab {

/// Number of workers implied by a --jobs value (0 = all hardware threads).
inline unsigned resolve_jobs(unsigned jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/**
 * Run fn(i) for i in [0, n) on up to `jobs` threads. Tasks must be
 * independent and write only to their own output slot; results are then
 * identical for any job count, which the pipeline determinism contract
 * relies on.
 */
inline void parallel_for(std::size_t n, unsigned jobs,
                         const std::function<void(std::size_t)>& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_jobs(jobs), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace trendlab
