#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fbmsde {

/// Runs fn(i) for i in [0, n) across n_threads workers. Work is partitioned
/// by index, so results written into per-index slots are independent of the
/// thread count and of scheduling order.
inline void parallel_for(std::size_t n, int n_threads,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (n_threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(std::size_t(n_threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fbmsde
