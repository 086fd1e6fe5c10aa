#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace eidlab {

// Worker cap: EIDLAB_THREADS when set (clamped to [1, hardware]), else hardware.
inline int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("EIDLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v < hw ? v : hw;
    }
    return hw;
}

// Static block partition of [0, n). The body must only write to index-owned
// state; determinism is the caller's job (counter-based RNG keyed by index).
inline void parallel_for(long n, const std::function<void(long)>& body) {
    int nt = thread_count();
    if (n <= 0) return;
    if (nt <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    if (nt > n) nt = static_cast<int>(n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        long lo = n * t / nt, hi = n * (t + 1) / nt;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace eidlab
