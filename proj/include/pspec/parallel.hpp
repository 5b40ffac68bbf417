#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pspec {

/// Worker count: PERIODIC_SPECTRA_THREADS if set and positive, else the
/// hardware concurrency.
inline unsigned worker_count()
{
    if (const char* env = std::getenv("PERIODIC_SPECTRA_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(worker, begin, end) over contiguous chunks of [0, n). The first
/// exception thrown by any worker is rethrown on the caller's thread.
template <typename Body>
void parallel_chunks(std::size_t n, Body&& body, unsigned workers = worker_count())
{
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(n, 1)));
    if (workers == 1) {
        body(0u, std::size_t{0}, n);
        return;
    }
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, w, b, e] {
            try {
                body(w, b, e);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace pspec
