#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace aew {

struct MethodTag {
    std::string name;  // e.g. "AE-WA", "Benchmark-EM", "Oracle"
    int m = 0;
    int n = 1;
    double gamma = 1.0;
    std::string mode;  // "quadrature", "mc", ...
};

/// A price with its Monte Carlo standard error; std_err == 0 exactly when
/// the method is deterministic (quadrature).
struct PriceEstimate {
    double value = 0.0;
    double std_err = 0.0;
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
    MethodTag method;

    bool deterministic() const { return paths == 0; }
};

// Sample mean and its standard error from running sums.
inline PriceEstimate estimate_from_sums(double sum, double sum_sq, std::uint64_t count, std::uint64_t seed,
                                        MethodTag method) {
    PriceEstimate e;
    const double n = static_cast<double>(count);
    e.value = sum / n;
    const double var = count > 1 ? (sum_sq - n * e.value * e.value) / (n - 1.0) : 0.0;
    e.std_err = var > 0.0 ? std::sqrt(var / n) : 0.0;
    e.paths = count;
    e.seed = seed;
    e.method = std::move(method);
    return e;
}

inline double combined_std_err(const PriceEstimate& a, const PriceEstimate& b) {
    return std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
}

} // namespace aew
