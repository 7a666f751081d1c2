// Deterministic parallel reduction: the grid is cut into fixed-size chunks and
// partial results are merged along a fixed-shape binary tree, so the result is
// bit-identical for any worker count.
#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qtopo {

inline int default_thread_count() {
    if (const char* env = std::getenv("QTOPO_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

// per_chunk(lo, hi) -> Partial;  Partial must have merge(const Partial&).
template <class Partial, class Fn>
Partial parallel_reduce(long n_items, long chunk_size, const Fn& per_chunk, int threads = 0) {
    if (threads <= 0) threads = default_thread_count();
    if (n_items <= 0) return Partial{};
    long n_chunks = (n_items + chunk_size - 1) / chunk_size;
    std::vector<Partial> parts(size_t(n_chunks));
    if (threads == 1 || n_chunks == 1) {
        for (long c = 0; c < n_chunks; ++c)
            parts[size_t(c)] = per_chunk(c * chunk_size, std::min(n_items, (c + 1) * chunk_size));
    } else {
        std::atomic<long> next{0};
        auto worker = [&] {
            for (;;) {
                long c = next.fetch_add(1);
                if (c >= n_chunks) return;
                parts[size_t(c)] = per_chunk(c * chunk_size, std::min(n_items, (c + 1) * chunk_size));
            }
        };
        std::vector<std::thread> pool;
        int nt = int(std::min<long>(threads, n_chunks));
        pool.reserve(size_t(nt));
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // fixed-shape pairwise tree
    while (parts.size() > 1) {
        std::vector<Partial> up;
        up.reserve((parts.size() + 1) / 2);
        for (size_t i = 0; i + 1 < parts.size(); i += 2) {
            parts[i].merge(parts[i + 1]);
            up.push_back(parts[i]);
        }
        if (parts.size() % 2) up.push_back(parts.back());
        parts.swap(up);
    }
    return parts[0];
}

} // namespace qtopo
