// Small numeric and threading helpers: pairwise summation and a
// deterministic parallel-for over an index range.
#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace cqr {

// Pairwise (cascade) summation. Deterministic for a fixed input vector,
// with O(log n) error growth instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

// Runs body(i) for i in [0, count). Each index must write only to its own
// output slot; the loop schedule then cannot affect results, so any thread
// count produces identical output.
inline void parallel_for_index(std::size_t count, int threads,
                               const std::function<void(std::size_t)>& body) {
    if (threads < 1) threads = 1;
    const auto hw = std::thread::hardware_concurrency();
    if (hw > 0 && static_cast<unsigned>(threads) > hw * 4) threads = static_cast<int>(hw * 4);
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t n_workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                // Strided assignment: worker w owns i = w, w + T, w + 2T, ...
                for (std::size_t i = w; i < count; i += n_workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cqr
