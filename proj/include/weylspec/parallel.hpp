#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace weylspec {

/// Worker-pool sizing for data-parallel sweeps. threads == 1 runs inline;
/// threads == 0 means hardware concurrency.
struct ExecPolicy {
    unsigned threads = 1;

    unsigned effective_threads() const {
        if (threads != 0) return threads;
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
};

/// Run body(i) for i in [0, n). Results must be written to index-addressed
/// slots by the caller; completion order is unspecified but slot placement
/// makes reductions deterministic.
inline void parallel_for(std::size_t n, const ExecPolicy& exec,
                         const std::function<void(std::size_t)>& body) {
    const unsigned nt = exec.effective_threads();
    if (n == 0) return;
    if (nt <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n); // drain remaining work
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(nt, n));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// Deterministic parallel map: out[i] = f(i).
template <class T>
std::vector<T> parallel_map(std::size_t n, const ExecPolicy& exec,
                            const std::function<T(std::size_t)>& f) {
    std::vector<T> out(n);
    parallel_for(n, exec, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

} // namespace weylspec
