#pragma once

#include <cstdint>
#include <vector>

#include "aew/interpolation.hpp"
#include "aew/models.hpp"
#include "aew/parallel.hpp"
#include "aew/price_estimate.hpp"
#include "aew/pricer.hpp"

namespace aew {

struct GridSpec {
    int n = 1;
    double gamma = 1.0;
    double T = 1.0;
};

/// t_k = k^gamma T / n^gamma, k = 0..n, and s_k = t_k - t_{k-1}, k = 1..n.
/// Interior t_k are rounded to multiples of ulp(T), so the left fold
/// s_1 + ... + s_k reproduces t_k exactly and the steps sum to T with no rounding.
struct TimeGrid {
    std::vector<double> t;  // n + 1 points, t.front() = 0, t.back() = T
    std::vector<double> s;  // n steps
};

TimeGrid make_grid(const GridSpec& g);

inline constexpr int kDefaultSpatialNodes = 801;
inline constexpr int kMinSpatialNodes = 101;
inline constexpr double kSpatialSpanSd = 8.0;
// Lowest spatial node, as a fraction of s0. Below it the process is treated as
// absorbed: q_k(y) = f(max(y, 0)).
inline constexpr double kSpatialFloorFraction = 0.01;

struct ChainOptions {
    int spatial_nodes = kDefaultSpatialNodes;
    int quadrature_nodes = kDefaultQuadratureNodes;
    Exec exec = Exec::Parallel;
};

/// Q^m_(s_n) ... Q^m_(s_1) f (x0) by backward induction on a uniform spatial
/// grid spanning x0 +- 8 total standard deviations (clamped below at the
/// floor). Each level stores q_k at the nodes and reads it back through a
/// monotone cubic interpolant. n = 1 is exactly q_step_1d at x0.
PriceEstimate chain_price_1d(const LocalVolCev& model, const PayoffSpec& payoff, const GridSpec& g, int m,
                             const ChainOptions& options = {});

// Interpolated q_{n-1}, ..., q_1 on the spatial grid (n - 1 entries), for diagnostics.
std::vector<MonotoneCubic> chain_levels_1d(const LocalVolCev& model, const PayoffSpec& payoff, const GridSpec& g,
                                           int m, const ChainOptions& options = {});

inline constexpr int kMaxNestedLevels = 3;

/// The backward chain as nested Monte Carlo: every evaluation of q_k at a point draws
/// `paths_per_level` fresh proxy samples. The standard error is that of the
/// outer average. Cost is paths^n, hence n <= 3.
PriceEstimate chain_price_mc(const LocalVolCev& model, const PayoffSpec& payoff, const GridSpec& g, int m,
                             std::uint64_t paths_per_level, std::uint64_t seed, std::uint64_t stream = 0,
                             Exec exec = Exec::Parallel);

inline constexpr std::uint64_t kMinSabrChainPaths = 10000;

/// Two-step SABR scheme: outer Monte Carlo over the two-dimensional proxy at
/// s_1 with the two-dimensional weight, inner step by the marginal first-order
/// expansion (quadrature) re-anchored at each sample. Requires g.n == 2.
PriceEstimate chain_price_sabr_n2(const LogNormalSabr& model, const PayoffSpec& payoff, const GridSpec& g,
                                  std::uint64_t paths, std::uint64_t seed, std::uint64_t stream = 0,
                                  Exec exec = Exec::Parallel);

} // namespace aew
