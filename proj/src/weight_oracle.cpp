#include "aew/weight_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aew/quadrature.hpp"
#include "aew/rng.hpp"

namespace aew {

namespace {

constexpr std::uint64_t kOraclePathStream = 0x6F7261636C65ull;   // "oracle"
constexpr std::uint64_t kOracleBridgeStream = 0x627269646765ull; // "bridge"

// Layout per (order, payoff): sum, sum_sq of total, then sum, sum_sq of correction.
constexpr std::size_t kSlots = 4;

void add_sample(std::span<double> acc, std::size_t cell, double total, double correction) {
    double* a = acc.data() + cell * kSlots;
    a[0] += total;
    a[1] += total * total;
    a[2] += correction;
    a[3] += correction * correction;
}

OracleTable table_from_sums(const std::vector<double>& sums, int max_order, std::size_t payoffs,
                            std::uint64_t paths, std::uint64_t seed) {
    OracleTable table(max_order, payoffs);
    for (int m = 0; m <= max_order; ++m) {
        for (std::size_t p = 0; p < payoffs; ++p) {
            const double* a = sums.data() + (static_cast<std::size_t>(m) * payoffs + p) * kSlots;
            MethodTag tag{"Oracle", m, 1, 1.0, "pathwise"};
            table.at(m, p).total = estimate_from_sums(a[0], a[1], paths, seed, tag);
            table.at(m, p).correction = estimate_from_sums(a[2], a[3], paths, seed, tag);
        }
    }
    return table;
}

void check_common(double t, std::uint64_t paths, int steps) {
    if (!(t > 0.0)) throw std::invalid_argument("oracle: t must be positive");
    if (paths < 2) throw std::invalid_argument("oracle: need at least two paths");
    if (steps < 1) throw std::invalid_argument("oracle: need at least one step");
}

} // namespace

OracleTable weight_oracle_mc(const LocalVolCev& model, int max_order, double t, double x,
                             std::span<const PayoffSpec> payoffs, std::uint64_t paths, std::uint64_t seed,
                             int steps, Exec exec) {
    check_common(t, paths, steps);
    if (max_order < 0 || max_order > 2) throw std::invalid_argument("oracle: order must be 0, 1 or 2");
    const double eps = model.epsilon();
    const double sig = model.sigma(x), sig1 = model.sigma_prime(x), sig2 = model.sigma_second(x);
    const double dt = t / steps, sqdt = std::sqrt(dt);
    const std::size_t np = payoffs.size();
    const std::size_t width = static_cast<std::size_t>(max_order + 1) * np * kSlots;

    auto sums = accumulate_sums(paths, width, exec, [&](std::size_t i, std::span<double> acc) {
        thread_local std::vector<double> z;
        z.resize(static_cast<std::size_t>(steps));
        NormalStream(seed, derive_stream(kOraclePathStream, i)).fill(0, z);
        double b = 0.0, s2 = 0.0, s3 = 0.0;
        for (int k = 0; k < steps; ++k) {
            const double db = sqdt * z[k];
            // (1/6) S''' = int (1/2)(sigma'' sigma^2 B^2 + 2 sigma' S2) dB
            s3 += 0.5 * (sig2 * sig * sig * b * b + 2.0 * sig1 * s2) * db;
            // (1/2) S'' = sigma sigma' int B dB
            s2 += sig * sig1 * b * db;
            b += db;
        }
        const double sbar = x + eps * sig * b;
        for (std::size_t p = 0; p < np; ++p) {
            const double f = payoffs[p](sbar);
            const double df = payoffs[p].derivative(sbar);
            double corr = 0.0;
            add_sample(acc, p, f, 0.0);
            if (max_order >= 1) {
                corr += eps * eps * df * s2;
                add_sample(acc, np + p, f + corr, corr);
            }
            if (max_order >= 2) {
                corr += eps * eps * eps * df * s3;
                add_sample(acc, 2 * np + p, f + corr, corr);
            }
        }
    });
    OracleTable table = table_from_sums(sums, max_order, np, paths, seed);
    if (max_order < 2) return table;

    // eps^4/2 E[f''(Sbar) S2^2]: point mass of size kink_slope_jump at the kink.
    const std::uint64_t bridge_paths = std::max<std::uint64_t>(4096, paths / 16);
    const double sd = eps * sig * std::sqrt(t);
    for (std::size_t p = 0; p < np; ++p) {
        const auto kink = payoffs[p].kink();
        if (!kink) continue;
        const double target = (*kink - x) / (eps * sig);
        const auto bsums = accumulate_sums<2>(bridge_paths, exec, [&](std::size_t j, std::array<double, 2>& acc) {
            thread_local std::vector<double> z;
            z.resize(static_cast<std::size_t>(steps));
            NormalStream(seed, derive_stream(derive_stream(kOracleBridgeStream, p), j)).fill(0, z);
            double w_end = 0.0;
            for (int k = 0; k < steps; ++k) w_end += sqdt * z[k];
            const double pull = (w_end - target) / t;
            double w = 0.0, b = 0.0, s2 = 0.0;
            for (int k = 0; k < steps; ++k) {
                w += sqdt * z[k];
                const double b_next = w - (k + 1) * dt * pull;
                s2 += sig * sig1 * b * (b_next - b);
                b = b_next;
            }
            acc[0] += s2 * s2;
            acc[1] += s2 * s2 * s2 * s2;
        });
        const PriceEstimate cond = estimate_from_sums(bsums[0], bsums[1], bridge_paths, seed, {});
        const double density = normal_pdf((*kink - x) / sd) / sd;
        const double scale = 0.5 * eps * eps * eps * eps * payoffs[p].kink_slope_jump() * density;
        for (PriceEstimate* e : {&table.at(2, p).total, &table.at(2, p).correction}) {
            e->value += scale * cond.value;
            e->std_err = std::sqrt(e->std_err * e->std_err + scale * scale * cond.std_err * cond.std_err);
        }
    }
    return table;
}

PriceEstimate weight_oracle_mc(const LocalVolCev& model, int order, double t, double x, const PayoffSpec& payoff,
                               std::uint64_t paths, std::uint64_t seed, int steps, Exec exec) {
    const PayoffSpec one[] = {payoff};
    return weight_oracle_mc(model, order, t, x, one, paths, seed, steps, exec).at(order, 0).total;
}

OracleTable weight_oracle_mc(const LogNormalSabr& model, double t, std::span<const double> x,
                             std::span<const PayoffSpec> payoffs, std::uint64_t paths, std::uint64_t seed,
                             int steps, Exec exec) {
    check_common(t, paths, steps);
    const double eps = model.epsilon(), eta = model.eta(), rho = model.rho(), rho_bar = model.rho_bar();
    const double x1 = x[0], sig = x[1];
    const double mu1 = -eta * sig * sig * t / 2.0;
    const double dt = t / steps, sqdt = std::sqrt(dt);
    const std::size_t np = payoffs.size();

    auto sums = accumulate_sums(paths, 2 * np * kSlots, exec, [&](std::size_t i, std::span<double> acc) {
        thread_local std::vector<double> z;
        z.resize(2 * static_cast<std::size_t>(steps));
        NormalStream(seed, derive_stream(kOraclePathStream, i)).fill(0, z);
        double b1 = 0.0, w = 0.0, x2 = 0.0;
        for (int k = 0; k < steps; ++k) {
            const double d1 = sqdt * z[2 * k];
            const double d2 = sqdt * z[2 * k + 1];
            x2 += -eta * sig * sig * w * dt + eta * sig * w * d1;
            b1 += d1;
            w += rho * d1 + rho_bar * d2;
        }
        const double xbar = x1 + eps * (mu1 + eta * sig * b1);
        for (std::size_t p = 0; p < np; ++p) {
            const double f = payoffs[p](xbar);
            const double corr = eps * eps * payoffs[p].derivative(xbar) * x2;
            add_sample(acc, p, f, 0.0);
            add_sample(acc, np + p, f + corr, corr);
        }
    });
    return table_from_sums(sums, 1, np, paths, seed);
}

} // namespace aew
