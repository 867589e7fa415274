#include "aew/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "aew/quadrature.hpp"
#include "aew/rng.hpp"

namespace aew {

namespace {

void check_args(int steps, std::uint64_t paths, double T, std::size_t payoffs) {
    if (steps < 1) throw std::invalid_argument("em_price: steps must be >= 1");
    if (paths < kMinBenchmarkPaths) throw std::invalid_argument("em_price: need at least 1000 paths");
    if (!(T > 0.0)) throw std::invalid_argument("em_price: T must be positive");
    if (payoffs == 0) throw std::invalid_argument("em_price: no payoffs");
}

// Tracks the lowest path index that produced a non-finite state.
class ExplosionGuard {
public:
    bool check(double value, std::size_t path) {
        if (std::isfinite(value)) return true;
        std::uint64_t cur = first_.load();
        while (path < cur && !first_.compare_exchange_weak(cur, path)) {
        }
        return false;
    }
    void rethrow() const {
        if (first_.load() != kNone)
            throw std::runtime_error("em_price: non-finite state on path " + std::to_string(first_.load()));
    }

private:
    static constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> first_{kNone};
};

// A control variate as a function of B_T ~ N(0, T): c(B) = a B^2 + b B + c0,
// mapped through the payoff. Its mean comes from Gaussian quadrature split at
// the preimages of the kink.
struct QuadraticControl {
    double a = 0.0, b = 0.0, c0 = 0.0;

    double operator()(double bt) const { return (a * bt + b) * bt + c0; }

    double mean(const PayoffSpec& f, double T) const {
        std::vector<double> cuts;
        if (const auto k = f.kink()) {
            if (a == 0.0) {
                if (b != 0.0) cuts.push_back((*k - c0) / b);
            } else {
                const double disc = b * b - 4.0 * a * (c0 - *k);
                if (disc >= 0.0) {
                    cuts.push_back((-b - std::sqrt(disc)) / (2.0 * a));
                    cuts.push_back((-b + std::sqrt(disc)) / (2.0 * a));
                }
            }
        }
        return gaussian_expectation([&](double bt) { return f((*this)(bt)); }, 0.0, std::sqrt(T), cuts, 128);
    }
};

struct PathOutcome {
    double state;    // first coordinate at T
    double control;  // control variate value, when used
};

// Runs `path(z)` per path and averages every payoff, with an optional control.
template <class PathFn>
std::vector<PriceEstimate> price_paths(std::span<const PayoffSpec> payoffs, std::size_t normals_per_path,
                                       std::uint64_t paths, std::uint64_t seed, std::uint64_t stream, Exec exec,
                                       int steps, const QuadraticControl* control, double T, PathFn&& path) {
    ExplosionGuard guard;
    const std::size_t np = payoffs.size();
    auto sums = accumulate_sums(paths, 2 * np, exec, [&](std::size_t i, std::span<double> acc) {
        thread_local std::vector<double> z;
        z.resize(normals_per_path);
        NormalStream(seed, derive_stream(stream, i)).fill(0, z);
        const PathOutcome out = path(z);
        if (!guard.check(out.state, i)) return;
        for (std::size_t p = 0; p < np; ++p) {
            double v = payoffs[p](out.state);
            if (control) v -= payoffs[p](out.control);
            acc[2 * p] += v;
            acc[2 * p + 1] += v * v;
        }
    });
    guard.rethrow();
    std::vector<PriceEstimate> result;
    const MethodTag tag{"Benchmark-EM", 0, steps, 1.0, control ? "mc-cv" : "mc"};
    for (std::size_t p = 0; p < np; ++p) {
        PriceEstimate e = estimate_from_sums(sums[2 * p], sums[2 * p + 1], paths, seed, tag);
        if (control) e.value += control->mean(payoffs[p], T);
        result.push_back(e);
    }
    return result;
}

} // namespace

std::vector<PriceEstimate> em_price(const VectorFieldSet& model, const Vec& x0, std::span<const PayoffSpec> payoffs,
                                    double T, int steps, std::uint64_t paths, std::uint64_t seed,
                                    std::uint64_t stream, Exec exec) {
    check_args(steps, paths, T, payoffs.size());
    const double dt = T / steps, sqdt = std::sqrt(dt), eps = model.epsilon;
    const int d = model.noise_dim;
    return price_paths(payoffs, static_cast<std::size_t>(steps) * d, paths, seed, stream, exec, steps, nullptr, T,
                       [&](const std::vector<double>& z) {
                           Vec x = x0;
                           for (int k = 0; k < steps; ++k) {
                               Vec next = x + model.drift(eps, x) * dt;
                               for (int j = 0; j < d; ++j)
                                   next += eps * sqdt * z[static_cast<std::size_t>(k) * d + j] * model.diffusion[j](x);
                               x = next;
                               if (!x.allFinite()) return PathOutcome{std::numeric_limits<double>::quiet_NaN(), 0.0};
                           }
                           return PathOutcome{x[0], 0.0};
                       });
}

std::vector<PriceEstimate> em_price(const LocalVolCev& model, std::span<const PayoffSpec> payoffs, double T,
                                    int steps, std::uint64_t paths, std::uint64_t seed, std::uint64_t stream,
                                    Exec exec, const EmOptions& options) {
    check_args(steps, paths, T, payoffs.size());
    const double dt = T / steps, sqdt = std::sqrt(dt);
    const double s0 = model.s0(), eps = model.epsilon(), beta = model.beta();
    const double floor = kLocalVolFloor * s0;
    // eps * s0^(1-beta) * sqrt(dt), so each step is one power of the level.
    const double scale = eps * model.sigma(s0) / std::pow(s0, beta) * sqdt;
    const bool sqrt_law = beta == 0.5;
    const double sig = model.sigma(s0), sig1 = model.sigma_prime(s0);
    QuadraticControl control{0.5 * eps * eps * sig * sig1, eps * sig, 0.0};
    control.c0 = s0 - control.a * T;
    return price_paths(payoffs, static_cast<std::size_t>(steps), paths, seed, stream, exec, steps,
                       options.control_variate ? &control : nullptr, T, [&](const std::vector<double>& z) {
                           double s = s0, b = 0.0;
                           for (int k = 0; k < steps; ++k) {
                               const double level = std::max(s, floor);
                               const double vol = sqrt_law ? std::sqrt(level) : std::pow(level, beta);
                               s = std::max(s + scale * vol * z[k], 0.0);
                               b += z[k];
                           }
                           return PathOutcome{s, control(b * sqdt)};
                       });
}

std::vector<PriceEstimate> em_price(const LogNormalSabr& model, std::span<const PayoffSpec> payoffs, double T,
                                    int steps, std::uint64_t paths, std::uint64_t seed, std::uint64_t stream,
                                    Exec exec, const EmOptions& options) {
    check_args(steps, paths, T, payoffs.size());
    const double dt = T / steps, sqdt = std::sqrt(dt);
    const double nu = model.nu(), rho = model.rho(), rho_bar = model.rho_bar(), sig0 = model.sigma0();
    const double vol_drift = -0.5 * nu * nu * dt;
    const QuadraticControl control{0.0, sig0, model.x0() - 0.5 * sig0 * sig0 * T};
    return price_paths(payoffs, 2 * static_cast<std::size_t>(steps), paths, seed, stream, exec, steps,
                       options.control_variate ? &control : nullptr, T, [&](const std::vector<double>& z) {
                           double x = model.x0(), sig = sig0, b1 = 0.0;
                           for (int k = 0; k < steps; ++k) {
                               const double z1 = z[2 * k], z2 = z[2 * k + 1];
                               x += -0.5 * sig * sig * dt + sig * sqdt * z1;
                               sig *= std::exp(nu * sqdt * (rho * z1 + rho_bar * z2) + vol_drift);
                               b1 += z1;
                           }
                           return PathOutcome{x, control(b1 * sqdt)};
                       });
}

} // namespace aew
