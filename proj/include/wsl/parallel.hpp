#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace wsl {

/// Worker-count policy: --threads flag, overridden by WSL_THREADS.
inline int resolve_threads(int requested) {
    if (const char* env = std::getenv("WSL_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) requested = v;
    }
    if (requested <= 0) requested = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, requested);
}

/// Index-parallel loop with deterministic result placement: body(i) runs once
/// for every i in [0, n); results must be written to per-index slots.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::min(std::max(1, threads), std::max(1, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace wsl
