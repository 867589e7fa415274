#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace aew {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]. Cached per n; thread-safe.
const QuadratureRule& gauss_legendre(int n);

// Gauss-Hermite for the standard normal density: sum_i w_i g(z_i) ~ E[g(Z)],
// exact for polynomials of degree <= 2n - 1. Cached per n; thread-safe.
const QuadratureRule& gauss_hermite(int n);

// Standard deviations kept on each side of the mean by the truncated rules.
inline constexpr double kGaussianTruncation = 12.0;

/// E[g(Y)], Y ~ N(mean, sd^2). Without a breakpoint inside the truncated
/// range this is a plain Gauss-Hermite rule with `nodes` points; otherwise the
/// range [mean - 12 sd, mean + 12 sd] is split at the breakpoints and each
/// panel gets a `nodes`-point Gauss-Legendre rule against the density.
double gaussian_expectation(const std::function<double(double)>& g, double mean, double sd,
                            std::span<const double> breakpoints, int nodes);

inline double normal_pdf(double z) { return 0.39894228040143267794 * std::exp(-0.5 * z * z); }

} // namespace aew
