#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdlab {

// Work is always split into chunks whose boundaries depend only on the
// problem size, never on the thread count. Callers reduce the per-chunk
// results in chunk order, which keeps every floating-point sum identical
// between a 1-thread and an N-thread run.
struct ChunkRange {
    std::size_t index;
    std::size_t begin;
    std::size_t end;
};

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
    return n == 0 ? 0 : (n + chunk_size - 1) / chunk_size;
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Calls fn(ChunkRange) for each chunk of [0, n). Chunks are handed out
// dynamically; the first exception thrown by any worker is rethrown here.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunk_size, unsigned threads, Fn&& fn) {
    const std::size_t chunks = chunk_count(n, chunk_size);
    if (chunks == 0) return;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), chunks));

    auto range_of = [&](std::size_t i) {
        const std::size_t b = i * chunk_size;
        return ChunkRange{i, b, std::min(n, b + chunk_size)};
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < chunks; ++i) fn(range_of(i));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= chunks) return;
            try {
                fn(range_of(i));
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(chunks, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace pdlab
