#pragma once

#include "aew/models.hpp"

namespace aew {

struct PdeOptions {
    double dx = 0.05;
    int time_steps = 2000;
    // Upper boundary at s0 + upper_sd * eps sigma(s0) sqrt(T).
    double upper_sd = 14.0;
    // Fully implicit half steps at the start (Rannacher smoothing of the kink).
    int rannacher_half_steps = 4;
};

/// E[f(S_T)] for the local vol model from the backward equation
///   u_tau = 1/2 eps^2 sigma(S)^2 u_SS  on [0, S_max],
/// Crank-Nicolson in time. sigma(0) = 0 makes S = 0 absorbing; the upper
/// boundary holds the payoff value. Used as the converged reference price.
double pde_price_local_vol(const LocalVolCev& model, const PayoffSpec& payoff, double T, const PdeOptions& options = {});

} // namespace aew
