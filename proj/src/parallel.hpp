#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "policy.hpp"

namespace gldp {

// Runs fn(i) for i in [0, n).  Each index does independent work; callers store
// per-index results and reduce in index order afterwards, so the outcome is
// identical for any thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int threads = effective_threads();
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace gldp
