/// @file parallel.hpp
/// @brief Minimal worker pool for independent per-subdomain tasks. Results
/// must land in per-index slots; callers combine them in index order so the
/// outcome is identical for every worker count.

#ifndef BDDC_PARALLEL_HPP
#define BDDC_PARALLEL_HPP

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "bddc/csr_matrix.hpp"

namespace bddc {

/// Runs fn(i) for i in [0, n) on up to worker_count threads (inline when 1).
/// The first thrown exception is rethrown on the calling thread.
inline void parallel_for(index_t n, index_t worker_count,
                         const std::function<void(index_t)>& fn) {
    if (worker_count < 1) worker_count = 1;
    if (worker_count == 1 || n <= 1) {
        for (index_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const index_t threads = std::min<index_t>(worker_count, n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (index_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (index_t i = t; i < n; i += threads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace bddc

#endif
