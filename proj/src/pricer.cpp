#include "aew/pricer.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aew/quadrature.hpp"
#include "aew/rng.hpp"

namespace aew {

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

MethodTag sabr_tag(int m, SabrStepMode mode) {
    return {"AE", m, 1, 1.0, mode == SabrStepMode::MarginalQuadrature ? "quadrature" : "mc"};
}

} // namespace

double q_step_1d(const ProxyLaw& law, const WeightFunction& w, const PayoffSpec& payoff, int nodes) {
    if (law.dim() != 1) throw std::invalid_argument("q_step_1d: law must be one-dimensional");
    if (nodes < 16) throw std::invalid_argument("q_step_1d: need at least 16 nodes");
    const double mean = law.mean()[0];
    const double var = law.covariance()(0, 0);
    if (!(law.t > 0.0) || !(var > 0.0)) return payoff(mean);
    const double sd = std::sqrt(var);

    std::vector<double> cuts;
    if (const auto k = payoff.kink()) cuts.push_back(*k);
    if (w.order() == 0) return gaussian_expectation([&](double y) { return payoff(y); }, mean, sd, cuts, nodes);
    const std::vector<double> anchor(law.anchor.data(), law.anchor.data() + law.anchor.size());
    const auto kernel = w.kernel_1d(law.t, anchor);
    return gaussian_expectation([&](double y) { return payoff(y) * kernel(y); }, mean, sd, cuts, nodes);
}

ProxyLaw sabr_marginal_law(const LogNormalSabr& model, std::span<const double> x, double t) {
    const double eta = model.eta(), sig = x[1];
    ProxyLaw law;
    law.skeleton = Vec::Constant(1, x[0]);
    law.jacobian = Mat::Identity(1, 1);
    law.mu = Vec::Constant(1, -eta * sig * sig * t / 2.0);
    law.sigma = Mat::Constant(1, 1, eta * eta * sig * sig * t);
    law.epsilon = model.epsilon();
    law.t = t;
    law.anchor = Vec(2);
    law.anchor << x[0], x[1];
    return law;
}

PriceEstimate q_step_sabr(const LogNormalSabr& model, std::span<const double> x, double t, const PayoffSpec& payoff,
                          int m, SabrStepMode mode, std::uint64_t paths, std::uint64_t seed, std::uint64_t stream,
                          Exec exec) {
    if (!(t > 0.0)) throw std::invalid_argument("q_step_sabr: t must be positive");
    if (m != 0 && m != 1) throw std::invalid_argument("q_step_sabr: order must be 0 or 1");
    if (mode == SabrStepMode::MarginalQuadrature) {
        const auto law = sabr_marginal_law(model, x, t);
        PriceEstimate e;
        e.seed = seed;
        e.method = sabr_tag(m, mode);
        const auto w = m == 0 ? WeightFunction::unit() : WeightFunction::sabr(model, SabrWeightKind::Marginal);
        e.value = q_step_1d(law, w, payoff);
        return e;
    }
    if (paths < kMinSabrStepPaths) throw std::invalid_argument("q_step_sabr: two-dimensional MC needs >= 1000 paths");
    const Vec anchor = (Vec(2) << x[0], x[1]).finished();
    const ProxyLaw law = proxy_law(model.field_set(), anchor, t, model.epsilon());
    const Vec mean = law.mean();
    const Mat chol = proxy_cholesky(law);
    const SabrTwoDimWeight weight(model, t, x[0], x[1]);
    const auto sums = accumulate_sums<2>(paths, exec, [&](std::size_t i, std::array<double, 2>& acc) {
        const NormalStream normals(seed, derive_stream(stream, i));
        const double z0 = normals(0), z1 = normals(1);
        const double y1 = mean[0] + chol(0, 0) * z0;
        const double y2 = mean[1] + chol(1, 0) * z0 + chol(1, 1) * z1;
        const double v = payoff(y1) * (m == 0 ? 1.0 : weight(y1, y2));
        acc[0] += v;
        acc[1] += v * v;
    });
    return estimate_from_sums(sums[0], sums[1], paths, seed, sabr_tag(m, mode));
}

double bachelier_call(double forward, double strike, double sd) {
    if (!(sd > 0.0)) return std::max(forward - strike, 0.0);
    const double d = (forward - strike) / sd;
    return (forward - strike) * norm_cdf(d) + sd * normal_pdf(d);
}

double bachelier_put(double forward, double strike, double sd) {
    return bachelier_call(forward, strike, sd) - (forward - strike);
}

double black_call(double forward, double strike, double total_sd) {
    if (!(total_sd > 0.0)) return std::max(forward - strike, 0.0);
    const double d1 = (std::log(forward / strike) + 0.5 * total_sd * total_sd) / total_sd;
    return forward * norm_cdf(d1) - strike * norm_cdf(d1 - total_sd);
}

double black_put(double forward, double strike, double total_sd) {
    return black_call(forward, strike, total_sd) - (forward - strike);
}

} // namespace aew
