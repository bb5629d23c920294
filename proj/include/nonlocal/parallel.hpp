#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace nonlocal {

/// Process-wide worker count for data-parallel loops. Results never
/// depend on it: work is split over output elements and each element is
/// accumulated in a fixed sequential order.
inline int& thread_count() {
    static int n = 1;
    return n;
}

template <typename F>
void parallel_for(std::size_t begin, std::size_t end, F&& body) {
    const int nt = thread_count();
    if (nt <= 1 || end - begin < 2 * static_cast<std::size_t>(nt)) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    const std::size_t chunk = (end - begin + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = begin + chunk * t;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace nonlocal
