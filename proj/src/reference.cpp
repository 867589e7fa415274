#include "aew/reference.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace aew {

namespace {

// Solves (1 + a_i) u_i - b_i (u_{i-1} + u_{i+1}) = r_i for interior i with
// fixed end values; b_i is half the off-diagonal coupling (theta * lambda_i).
void solve_tridiagonal(const std::vector<double>& lambda, double theta, std::vector<double>& u,
                       const std::vector<double>& rhs, std::vector<double>& c_prime, std::vector<double>& d_prime) {
    const std::size_t n = u.size();
    // Interior unknowns 1..n-2; boundary values u[0], u[n-1] fixed.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double off = -theta * lambda[i];
        const double diag = 1.0 + 2.0 * theta * lambda[i];
        double r = rhs[i];
        if (i == 1) r -= off * u[0];
        if (i + 2 == n) r -= off * u[n - 1];
        const double lower = i == 1 ? 0.0 : off;
        const double denom = diag - lower * c_prime[i - 1];
        c_prime[i] = (i + 2 == n) ? 0.0 : off / denom;
        d_prime[i] = (r - lower * d_prime[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        u[i] = d_prime[i] - (i + 2 == n ? 0.0 : c_prime[i] * u[i + 1]);
        if (i == 1) break;
    }
}

} // namespace

double pde_price_local_vol(const LocalVolCev& model, const PayoffSpec& payoff, double T, const PdeOptions& options) {
    if (!(T > 0.0)) throw std::invalid_argument("pde_price_local_vol: T must be positive");
    if (payoff.underlying_map != UnderlyingMap::Level)
        throw std::invalid_argument("pde_price_local_vol: payoff must act on the level");
    if (!(options.dx > 0.0) || options.time_steps < 1) throw std::invalid_argument("pde_price_local_vol: bad grid");
    const double s0 = model.s0(), eps = model.epsilon();
    const double smax = s0 + options.upper_sd * eps * model.sigma(s0) * std::sqrt(T);
    const auto cells = static_cast<std::size_t>(std::ceil(smax / options.dx));
    const double dx = options.dx;
    const std::size_t n = cells + 1;

    std::vector<double> u(n), rhs(n), lambda(n), cp(n), dp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = dx * static_cast<double>(i);
        u[i] = payoff(s);
        const double vol = i == 0 ? 0.0 : eps * model.sigma(s);
        lambda[i] = 0.5 * vol * vol / (dx * dx);
    }

    auto step = [&](double dtau, double theta) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double lap = u[i - 1] - 2.0 * u[i] + u[i + 1];
            rhs[i] = u[i] + (1.0 - theta) * dtau * lambda[i] * lap;
        }
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = dtau * lambda[i];
        solve_tridiagonal(scaled, theta, u, rhs, cp, dp);
    };

    const double dt = T / options.time_steps;
    int done_half = 0;
    for (; done_half < options.rannacher_half_steps && done_half < 2 * options.time_steps; ++done_half)
        step(0.5 * dt, 1.0);
    const int full = options.time_steps - done_half / 2;
    for (int k = 0; k < full; ++k) step(dt, 0.5);

    // Linear interpolation at s0 (exact when s0 is a node).
    const double pos = s0 / dx;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return frac == 0.0 ? u[i] : (1.0 - frac) * u[i] + frac * u[i + 1];
}

} // namespace aew
