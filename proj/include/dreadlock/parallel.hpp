#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace dreadlock {

/// Number of workers: `requested` (or the hardware concurrency when 0),
/// capped by the DREADLOCK_THREADS environment variable.
inline int worker_count(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* cap = std::getenv("DREADLOCK_THREADS")) {
        try {
            int c = std::stoi(cap);
            if (c > 0) n = std::min(n, c);
        } catch (const std::exception&) {
        }
    }
    return std::max(1, n);
}

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers. Results
/// are stored by index, so the output never depends on scheduling; the
/// exception of the lowest failing index is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn, int threads) {
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    const int workers = std::min<int>(worker_count(threads), static_cast<int>(std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<T> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace dreadlock
