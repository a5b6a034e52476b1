#pragma once

#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace negsym {

// Worker cap: NEGSYM_THREADS if set (minimum 1), hardware concurrency otherwise.
// Read on every call so tests can change the variable between sections.
inline int thread_budget() {
    if (const char* env = std::getenv("NEGSYM_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace detail {
inline bool& in_parallel_region() {
    thread_local bool flag = false;
    return flag;
}
}  // namespace detail

// Runs fn(i) for i in [0, count). Each index is processed exactly once and
// writes only to its own slot, so results are bitwise independent of the
// worker count. Nested calls degrade to sequential execution.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    if (count <= 0) return;
    int workers = thread_budget();
    if (workers > count) workers = count;
    if (workers <= 1 || detail::in_parallel_region()) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            detail::in_parallel_region() = true;
            try {
                for (int i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace negsym
