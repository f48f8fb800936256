// Minimal index-sharded parallel loop. Workers pull chunks off an atomic
// counter; results are written into per-index slots so output order never
// depends on scheduling.

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace syracuse {

inline unsigned default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 4 : n;
}

// Runs fn(chunk_lo, chunk_hi) over disjoint chunks covering [lo, hi).
// Exceptions are captured and the first one rethrown after all workers join.
inline void parallel_for_chunked(std::int64_t lo, std::int64_t hi,
                                 const std::function<void(std::int64_t, std::int64_t)>& fn,
                                 unsigned workers = 0, std::int64_t chunk = 16) {
    if (hi <= lo) return;
    if (workers == 0) workers = default_workers();
    if (chunk < 1) chunk = 1;
    std::int64_t total = hi - lo;
    if (workers <= 1 || total <= chunk) {
        fn(lo, hi);
        return;
    }
    std::atomic<std::int64_t> next{lo};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&] {
        while (true) {
            std::int64_t begin = next.fetch_add(chunk);
            if (begin >= hi) return;
            std::int64_t end = std::min(begin + chunk, hi);
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<std::uint64_t>(workers, static_cast<std::uint64_t>((total + chunk - 1) / chunk));
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Runs fn(i) for i in [lo, hi).
inline void parallel_for(std::int64_t lo, std::int64_t hi,
                         const std::function<void(std::int64_t)>& fn,
                         unsigned workers = 0, std::int64_t chunk = 16) {
    parallel_for_chunked(lo, hi, [&](std::int64_t a, std::int64_t b) {
        for (std::int64_t i = a; i < b; ++i) fn(i);
    }, workers, chunk);
}

}  // namespace syracuse
