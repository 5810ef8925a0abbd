#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace ragkit {

// Minimum-interval rate limiter shared by all provider clients of a process.
// per_second <= 0 disables limiting.
class RateLimiter {
  public:
    explicit RateLimiter(double per_second = 0.0) {
        if (per_second > 0.0)
            interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(1.0 / per_second));
    }

    void acquire() {
        if (interval_.count() == 0) return;
        std::unique_lock lock(mutex_);
        auto now = std::chrono::steady_clock::now();
        if (next_ < now) next_ = now;
        auto wait_until = next_;
        next_ += interval_;
        lock.unlock();
        std::this_thread::sleep_until(wait_until);
    }

  private:
    std::chrono::steady_clock::duration interval_{0};
    std::chrono::steady_clock::time_point next_{};
    std::mutex mutex_;
};

// Applies `fn` to every element, at most `parallelism` at a time, preserving
// input order in the result. The first exception wins and is rethrown after
// all workers drain.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& inputs, Fn fn, std::size_t parallelism)
    -> std::vector<decltype(fn(inputs.front()))> {
    using R = decltype(fn(inputs.front()));
    std::vector<std::optional<R>> slots(inputs.size());
    if (inputs.empty()) return {};

    if (parallelism <= 1 || inputs.size() == 1) {
        std::vector<R> out;
        out.reserve(inputs.size());
        for (const auto& in : inputs) out.push_back(fn(in));
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= inputs.size()) return;
            {
                std::lock_guard lock(error_mutex);
                if (first_error) return;
            }
            try {
                slots[i].emplace(fn(inputs[i]));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    std::size_t n_threads = std::min(parallelism, inputs.size());
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (first_error) std::rethrow_exception(first_error);
    std::vector<R> out;
    out.reserve(inputs.size());
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
}

} // namespace ragkit
