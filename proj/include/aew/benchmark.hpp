#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aew/models.hpp"
#include "aew/parallel.hpp"
#include "aew/price_estimate.hpp"

namespace aew {

inline constexpr std::uint64_t kMinBenchmarkPaths = 1000;

struct EmOptions {
    // Subtracts f(control) and adds back its exact mean; the control is driven
    // by the same increments, so the estimator stays unbiased.
    //   local vol: S0 + eps sigma B_T + eps^2 sigma sigma' (B_T^2 - T)/2
    //   SABR:      x0 - sigma0^2 T/2 + sigma0 B1_T
    bool control_variate = false;
};
// sigma(S) is evaluated at max(S, kLocalVolFloor * s0).
inline constexpr double kLocalVolFloor = 1e-8;

/// Euler-Maruyama on the full perturbed SDE; one simulation prices every payoff.
/// Path i draws its increments from substream derive_stream(stream, i), index
/// step * d + j. A non-finite state throws std::runtime_error naming the path.
std::vector<PriceEstimate> em_price(const VectorFieldSet& model, const Vec& x0, std::span<const PayoffSpec> payoffs,
                                    double T, int steps, std::uint64_t paths, std::uint64_t seed,
                                    std::uint64_t stream = 0, Exec exec = Exec::Parallel);

/// dS = eps sigma(S) dB with sigma at the floor near zero; S is kept >= 0,
/// which makes zero absorbing up to the floor volatility.
std::vector<PriceEstimate> em_price(const LocalVolCev& model, std::span<const PayoffSpec> payoffs, double T,
                                    int steps, std::uint64_t paths, std::uint64_t seed, std::uint64_t stream = 0,
                                    Exec exec = Exec::Parallel, const EmOptions& options = {});

/// sigma advanced exactly (geometric Brownian motion), X1 by Euler with the
/// correlated increment: dX1 = -sigma^2/2 dt + sigma dB1.
std::vector<PriceEstimate> em_price(const LogNormalSabr& model, std::span<const PayoffSpec> payoffs, double T,
                                    int steps, std::uint64_t paths, std::uint64_t seed, std::uint64_t stream = 0,
                                    Exec exec = Exec::Parallel, const EmOptions& options = {});

} // namespace aew
