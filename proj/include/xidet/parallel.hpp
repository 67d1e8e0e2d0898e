#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace xidet {

// Runs fn(i) for i in [0, n) across a small thread pool. Work items must be
// independent; callers reduce results afterwards in index order so output
// stays deterministic.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn, unsigned threads = 0) {
    if (threads == 0) {
        threads = std::thread::hardware_concurrency();
        if (threads == 0) threads = 1;
    }
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace xidet
