#ifndef ITRES_PARALLEL_HPP
#define ITRES_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace itres {

// Worker count: ITRES_THREADS if set, otherwise hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("ITRES_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Maps fn over items on several threads. Results come back indexed by input
// position, so any later reduction is deterministic regardless of the worker
// count.
template <typename R, typename T, typename Fn>
std::vector<R> parallel_map(const std::vector<T>& items, Fn fn) {
    const unsigned nw = thread_count();
    std::vector<R> out(items.size());
    if (items.size() <= 1 || nw == 1) {
        for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= items.size()) break;
            out[i] = fn(items[i]);
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(nw, items.size()));
    for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

// Deterministic block-sum for float accumulations: fn(i) yields the i-th
// block value; blocks are added in index order.
template <typename F, typename Fn>
F parallel_block_sum(std::size_t nblocks, Fn fn) {
    std::vector<std::size_t> idx(nblocks);
    for (std::size_t i = 0; i < nblocks; ++i) idx[i] = i;
    std::vector<F> vals = parallel_map<F, std::size_t>(idx, fn);
    F acc{};
    for (const auto& v : vals) acc += v;
    return acc;
}

} // namespace itres

#endif
