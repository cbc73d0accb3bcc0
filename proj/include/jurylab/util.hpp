// Small shared utilities: worker-count control and a deterministic parallel
// map over index ranges.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace jurylab::util {

/// Worker cap: hardware concurrency, bounded by the JURYLAB_THREADS
/// environment variable when set.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("JURYLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

/// Split [0, total) into contiguous chunks, run `fn(lo, hi)` per chunk (possibly
/// on several threads) and return the per-chunk results in chunk order. The
/// chunking is a pure function of `total`, never of the worker count, so any
/// order-independent reduction over the results is deterministic.
template <typename R, typename Fn>
std::vector<R> parallel_map(long long total, Fn&& fn) {
    constexpr long long kChunk = 16384;
    const long long chunks = (total + kChunk - 1) / kChunk;
    std::vector<R> results(static_cast<std::size_t>(chunks));
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(chunks));
    if (workers <= 1) {
        for (long long i = 0; i < chunks; ++i)
            results[static_cast<std::size_t>(i)] =
                fn(i * kChunk, std::min(total, (i + 1) * kChunk));
        return results;
    }
    std::atomic<long long> cursor{0};
    auto body = [&] {
        for (;;) {
            const long long i = cursor.fetch_add(1);
            if (i >= chunks) return;
            results[static_cast<std::size_t>(i)] =
                fn(i * kChunk, std::min(total, (i + 1) * kChunk));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace jurylab::util
