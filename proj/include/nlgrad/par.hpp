#pragma once
#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nlgrad {

// Worker cap: NLGRAD_THREADS if set, else 1 (solves are single-threaded by
// default; results are identical for any thread count because loops are
// split over disjoint output slots).
inline int thread_count() {
    static int n = [] {
        const char* env = std::getenv("NLGRAD_THREADS");
        if (!env) return 1;
        int v = std::atoi(env);
        if (v < 1) return 1;
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        return std::min(v, hw > 0 ? hw : v);
    }();
    return n;
}

template <class F>
void parallel_for(long n, F&& body) {
    int nt = thread_count();
    if (nt <= 1 || n < 256) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    long chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        long lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace nlgrad
