#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aew/models.hpp"
#include "aew/parallel.hpp"
#include "aew/price_estimate.hpp"

namespace aew {

// Brownian grid used by the pathwise oracle.
inline constexpr int kOracleSteps = 1024;

struct OracleEstimate {
    // E[f(Xbar)] plus the expansion corrections up to the requested order.
    PriceEstimate total;
    // The corrections alone; same paths, so a much smaller standard error.
    PriceEstimate correction;
};

/// Oracle results indexed by (order, payoff).
class OracleTable {
public:
    OracleTable(int max_order, std::size_t payoffs) : max_order_(max_order), payoffs_(payoffs),
        cells_(static_cast<std::size_t>(max_order + 1) * payoffs) {}

    const OracleEstimate& at(int order, std::size_t payoff) const { return cells_[index(order, payoff)]; }
    OracleEstimate& at(int order, std::size_t payoff) { return cells_[index(order, payoff)]; }
    int max_order() const { return max_order_; }
    std::size_t payoffs() const { return payoffs_; }

private:
    std::size_t index(int order, std::size_t payoff) const {
        return static_cast<std::size_t>(order) * payoffs_ + payoff;
    }
    int max_order_;
    std::size_t payoffs_;
    std::vector<OracleEstimate> cells_;
};

/// Weight-free Monte Carlo of E[f(Xbar)] + sum_j eps^j E[f(Xbar) Phi^j] for
/// local vol, in its pre-integration-by-parts form:
///   order 1: + eps^2 E[f'(Sbar) S2]
///   order 2: + eps^3 E[f'(Sbar) S3] + eps^4/2 E[f''(Sbar) S2^2]
/// S2 = (1/2) d2S/deps2|0 and S3 = (1/6) d3S/deps3|0 are built pathwise as Ito
/// sums on a `steps`-point Brownian grid. f'' of a call/put is a point mass at
/// the strike; that term is p_Sbar(K) * E[S2^2 | Sbar = K], estimated on
/// Brownian bridges pinned at the strike.
OracleTable weight_oracle_mc(const LocalVolCev& model, int max_order, double t, double x,
                             std::span<const PayoffSpec> payoffs, std::uint64_t paths, std::uint64_t seed,
                             int steps = kOracleSteps, Exec exec = Exec::Parallel);

PriceEstimate weight_oracle_mc(const LocalVolCev& model, int order, double t, double x, const PayoffSpec& payoff,
                               std::uint64_t paths, std::uint64_t seed, int steps = kOracleSteps,
                               Exec exec = Exec::Parallel);

/// SABR first order: E[f(Xbar1)] + eps^2 E[f'(Xbar1) X2], with
/// X2 = -eta sigma^2 int W ds + eta sigma int W dB1 and W = rho B1 + rhobar B2.
OracleTable weight_oracle_mc(const LogNormalSabr& model, double t, std::span<const double> x,
                             std::span<const PayoffSpec> payoffs, std::uint64_t paths, std::uint64_t seed,
                             int steps = kOracleSteps, Exec exec = Exec::Parallel);

} // namespace aew
