#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cotlab {

// Deterministic task-parallel map: the task decomposition (task count, per-task
// seeds) is fixed by the caller, never by the worker count, and every task is
// pure, so outputs are bit-identical for any number of workers. Workers only
// affect which thread happens to run which task.
class parallel_map {
public:
    explicit parallel_map(unsigned workers = 1)
        : workers_(workers == 0 ? 1 : workers) {}

    unsigned workers() const { return workers_; }

    // runs fn(i) for i in [0, n); fn writes its result into caller-owned slot i
    void for_tasks(std::size_t n, const std::function<void(std::size_t)>& fn) const {
        if (n == 0) return;
        unsigned w = workers_;
        if (w > n) w = static_cast<unsigned>(n);
        if (w <= 1) {
            for (std::size_t i = 0; i < n; ++i) fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mu;
        auto body = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(w);
        for (unsigned t = 0; t < w; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

private:
    unsigned workers_;
};

} // namespace cotlab
