#pragma once

#include <array>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include <omp.h>

namespace aew {

// Serial is the plain reference loop; Parallel is the OpenMP kernel.
enum class Exec { Serial, Parallel };

// Worker cap: AEW_THREADS if set, else the OpenMP default.
int worker_threads();
void set_worker_threads(int n);

class ScopedWorkerThreads {
public:
    explicit ScopedWorkerThreads(int n) : previous_(worker_threads()) { set_worker_threads(n); }
    ~ScopedWorkerThreads() { set_worker_threads(previous_); }
    ScopedWorkerThreads(const ScopedWorkerThreads&) = delete;
    ScopedWorkerThreads& operator=(const ScopedWorkerThreads&) = delete;

private:
    int previous_;
};

inline constexpr std::size_t kPathBlock = 1024;

// Keeps the first exception thrown inside an OpenMP region for rethrow after it.
class ExceptionSlot {
public:
    template <class Fn>
    void run(Fn&& fn) noexcept {
        try {
            fn();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

/// Accumulates K running sums over `count` independent items.
///
/// Parallel mode sums fixed blocks of kPathBlock items independently and then
/// adds the block partials in block order, so the result is bit-identical for
/// any thread count. Serial mode is one straight loop over all items.
template <std::size_t K, class ItemFn>
std::array<double, K> accumulate_sums(std::size_t count, Exec exec, ItemFn&& item) {
    std::array<double, K> total{};
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < count; ++i) item(i, total);
        return total;
    }
    const std::size_t blocks = (count + kPathBlock - 1) / kPathBlock;
    std::vector<std::array<double, K>> partial(blocks);
    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
    for (std::size_t b = 0; b < blocks; ++b) {
        errors.run([&] {
            std::array<double, K> acc{};
            const std::size_t end = (b + 1) * kPathBlock < count ? (b + 1) * kPathBlock : count;
            for (std::size_t i = b * kPathBlock; i < end; ++i) item(i, acc);
            partial[b] = acc;
        });
    }
    errors.rethrow();
    for (const auto& p : partial)
        for (std::size_t k = 0; k < K; ++k) total[k] += p[k];
    return total;
}

// Runtime-width variant of accumulate_sums; `item(i, acc)` adds into acc[0..width).
template <class ItemFn>
std::vector<double> accumulate_sums(std::size_t count, std::size_t width, Exec exec, ItemFn&& item) {
    std::vector<double> total(width, 0.0);
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < count; ++i) item(i, std::span<double>(total));
        return total;
    }
    const std::size_t blocks = (count + kPathBlock - 1) / kPathBlock;
    std::vector<double> partial(blocks * width, 0.0);
    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
    for (std::size_t b = 0; b < blocks; ++b) {
        errors.run([&] {
            std::span<double> acc(partial.data() + b * width, width);
            const std::size_t end = (b + 1) * kPathBlock < count ? (b + 1) * kPathBlock : count;
            for (std::size_t i = b * kPathBlock; i < end; ++i) item(i, acc);
        });
    }
    errors.rethrow();
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t k = 0; k < width; ++k) total[k] += partial[b * width + k];
    return total;
}

// Independent outputs per index; no reduction, so both modes agree bit for bit.
template <class IndexFn>
void for_each_index(std::size_t count, Exec exec, IndexFn&& fn) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic, 8) num_threads(worker_threads())
    for (std::size_t i = 0; i < count; ++i) errors.run([&] { fn(i); });
    errors.rethrow();
}

} // namespace aew
