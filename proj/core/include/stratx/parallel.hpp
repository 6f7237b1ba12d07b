#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace stratx {

// Worker cap: hardware concurrency, reduced by the STRATX_THREADS
// environment variable when set. Always at least 1.
std::size_t worker_count();

// Run fn(i) for i in [0, n) across up to worker_count() threads using
// contiguous static chunks. Each index is processed exactly once and callers
// merge results in index order, so output never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

} // namespace stratx
