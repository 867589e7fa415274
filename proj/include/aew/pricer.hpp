#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "aew/gaussian_proxy.hpp"
#include "aew/models.hpp"
#include "aew/parallel.hpp"
#include "aew/price_estimate.hpp"
#include "aew/weights.hpp"

namespace aew {

inline constexpr int kDefaultQuadratureNodes = 128;

/// Q^m_(t) f(x) = E[f(Xbar) M^m(t, x, Xbar)] for a one-dimensional proxy law.
/// The payoff kink is a quadrature breakpoint. Zero variance returns f(mean).
/// `law.anchor` is what the weight is anchored at; for the SABR marginal weight
/// it is the full state (x1, sigma) while the law is that of Xbar_1 alone.
double q_step_1d(const ProxyLaw& law, const WeightFunction& w, const PayoffSpec& payoff,
                 int nodes = kDefaultQuadratureNodes);

/// One-dimensional law of Xbar_1 for SABR at anchor (x1, sigma), step t.
ProxyLaw sabr_marginal_law(const LogNormalSabr& model, std::span<const double> x, double t);

enum class SabrStepMode { MarginalQuadrature, TwoDimMc };

inline constexpr std::uint64_t kMinSabrStepPaths = 1000;

/// One SABR step at anchor x = (x1, sigma), order m in {0, 1}.
/// MarginalQuadrature is deterministic (paths = 0); TwoDimMc averages
/// f(Y1) M(Y1, Y2) over `paths` draws of the two-dimensional proxy.
PriceEstimate q_step_sabr(const LogNormalSabr& model, std::span<const double> x, double t, const PayoffSpec& payoff,
                          int m, SabrStepMode mode, std::uint64_t paths = 0, std::uint64_t seed = 0,
                          std::uint64_t stream = 0, Exec exec = Exec::Parallel);

// Closed forms used as oracles.
double bachelier_call(double forward, double strike, double sd);
double bachelier_put(double forward, double strike, double sd);
// Black-Scholes with zero rate; total_sd = vol * sqrt(T).
double black_call(double forward, double strike, double total_sd);
double black_put(double forward, double strike, double total_sd);

} // namespace aew
