#include "randzeros/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace randzeros {

unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_chunks(std::size_t n_chunks, unsigned workers,
                     const std::function<void(std::size_t)>& fn) {
    workers = resolve_workers(workers);
    if (n_chunks == 0) return;
    if (workers <= 1 || n_chunks == 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_chunks) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(workers, n_chunks));
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace randzeros
