#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace matpath {

// Runs f(i) for i in [0, n) on up to `threads` threads with a static block
// partition. Results must go to disjoint slots so the outcome is independent
// of the thread count. The first exception thrown by any worker is rethrown.
template <class F>
void parallelFor(int n, unsigned threads, F&& f) {
    if (n <= 0) return;
    const unsigned workers = std::min<unsigned>(std::max(threads, 1u), static_cast<unsigned>(n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr firstError;
    std::mutex errorMutex;
    const int chunk = (n + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const int lo = static_cast<int>(w) * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(errorMutex);
                if (!firstError) firstError = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (firstError) std::rethrow_exception(firstError);
}

}  // namespace matpath
