#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zetamax {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Static block partition of [0, n) over workers. Work item i is a pure
// function of i alone, so the split cannot change results, only wall time.
// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
inline void parallel_for(size_t n, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const size_t nworkers = std::min<size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (size_t w = 0; w < nworkers; ++w) {
        const size_t begin = n * w / nworkers;
        const size_t end = n * (w + 1) / nworkers;
        pool.emplace_back([&, begin, end] {
            try {
                for (size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace zetamax
