// parallel.hpp — minimal index-range work sharing

#pragma once

#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace oscnc {

// Runs fn(i) for i in [begin, end). With threads > 1 the range is striped
// across workers; callers must write results to per-index storage so the
// outcome is independent of scheduling.
inline void parallel_for(int begin, int end, int threads,
                         const std::function<void(int)>& fn) {
    const int count = end - begin;
    if (count <= 0) return;
    if (threads <= 1 || count == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    const int workers = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w_index = w]() {
            try {
                for (int i = begin + w_index; i < end; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace oscnc
