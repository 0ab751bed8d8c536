#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace diffhmm {

/// Number of workers to use: `requested`, or hardware concurrency when 0.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(blockIndex, begin, end) over [0, nItems) split into fixed-size
/// blocks. Block boundaries depend only on nItems and blockSize, never on the
/// worker count, so per-block results reduced in block order afterwards are
/// identical for any number of threads.
template <typename Fn>
void parallel_blocks(std::int64_t nItems, std::int64_t blockSize, int threads, Fn&& fn) {
    const std::int64_t nBlocks = (nItems + blockSize - 1) / blockSize;
    threads = std::min<std::int64_t>(resolve_threads(threads), nBlocks);
    if (threads <= 1) {
        for (std::int64_t b = 0; b < nBlocks; ++b)
            fn(b, b * blockSize, std::min(nItems, (b + 1) * blockSize));
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t b = next.fetch_add(1);
                if (b >= nBlocks) break;
                fn(b, b * blockSize, std::min(nItems, (b + 1) * blockSize));
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace diffhmm
