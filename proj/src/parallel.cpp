#include "aew/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace aew {

namespace {

int initial_threads() {
    if (const char* env = std::getenv("AEW_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    return omp_get_max_threads();
}

std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{initial_threads()};
    return cap;
}

} // namespace

int worker_threads() { return thread_cap().load(std::memory_order_relaxed); }

void set_worker_threads(int n) { thread_cap().store(n > 0 ? n : 1, std::memory_order_relaxed); }

} // namespace aew
