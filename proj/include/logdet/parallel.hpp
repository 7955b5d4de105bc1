#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace logdet {

/// 0 means one thread per hardware core.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/**
 * Runs body(i) for i in [0, count) on up to `threads` workers.
 *
 * Work items are claimed dynamically, so body must write only to slot i of
 * its output; callers reduce the slots in index order afterwards. The first
 * exception thrown by any item is rethrown on the calling thread.
 */
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, resolve_threads(threads)));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(std::min(workers, count) - 1);
    for (std::size_t t = 1; t < std::min(workers, count); ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace logdet
