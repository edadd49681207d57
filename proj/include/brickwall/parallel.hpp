#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace brickwall {

// Static partition of [0, n) into contiguous chunks, one per thread. Workers
// must write only to their own replica slots; merged statistics are then
// computed from replica-indexed arrays, so results never depend on the
// thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (threads < 1) threads = 1;
    const std::size_t t = std::min<std::size_t>(threads, n ? n : 1);
    if (t <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t begin = n * i / t;
        const std::size_t end = n * (i + 1) / t;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

inline int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace brickwall
