#include "aew/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aew {

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& field, const Vec& x,
                               double relative_step) {
    const Vec f0 = field(x);
    Mat jac(f0.size(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = relative_step * std::max(1.0, std::abs(x[k]));
        Vec up = x, down = x;
        up[k] += h;
        down[k] -= h;
        jac.col(k) = (field(up) - field(down)) / (2.0 * h);
    }
    return jac;
}

LocalVolCev::LocalVolCev(double s0, double beta, double epsilon)
    : s0_(s0), beta_(beta), epsilon_(epsilon) {
    if (!(s0 > 0.0) || !std::isfinite(s0)) throw std::invalid_argument("local vol: s0 must be positive");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("local vol: beta must lie in (0, 1]");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("local vol: epsilon must lie in (0, 1]");
    scale_ = std::pow(s0, 1.0 - beta);
}

void LocalVolCev::check_domain(double x) const {
    if (!(x > 0.0)) throw std::domain_error("local vol: sigma evaluated at non-positive spot");
}

double LocalVolCev::sigma(double x) const {
    check_domain(x);
    return beta_ == 1.0 ? x : scale_ * std::pow(x, beta_);
}

double LocalVolCev::sigma_prime(double x) const {
    check_domain(x);
    return beta_ == 1.0 ? 1.0 : scale_ * beta_ * std::pow(x, beta_ - 1.0);
}

double LocalVolCev::sigma_second(double x) const {
    check_domain(x);
    return beta_ == 1.0 ? 0.0 : scale_ * beta_ * (beta_ - 1.0) * std::pow(x, beta_ - 2.0);
}

VectorFieldSet LocalVolCev::field_set() const {
    VectorFieldSet v;
    v.state_dim = 1;
    v.noise_dim = 1;
    v.epsilon = epsilon_;
    v.initial_state = Vec::Constant(1, s0_);
    v.constant_skeleton = true;
    v.drift = [](double, const Vec&) { return Vec::Zero(1).eval(); };
    v.drift_eps_deriv_at_zero = [](const Vec&) { return Vec::Zero(1).eval(); };
    v.drift_jacobian_at_zero = [](const Vec&) { return Mat::Zero(1, 1).eval(); };
    const LocalVolCev self = *this;
    v.diffusion.push_back([self](const Vec& x) { return Vec::Constant(1, self.sigma(x[0])).eval(); });
    v.diffusion_jacobian.push_back(
        [self](const Vec& x) { return Mat::Constant(1, 1, self.sigma_prime(x[0])).eval(); });
    return v;
}

VectorFieldSet build_local_vol(double s0, double beta, double epsilon) {
    return LocalVolCev(s0, beta, epsilon).field_set();
}

LogNormalSabr::LogNormalSabr(double z, double sigma0, double nu, double rho)
    : z_(z), sigma0_(sigma0), nu_(nu), rho_(rho) {
    if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("sabr: z must be positive");
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw std::invalid_argument("sabr: sigma0 must be positive");
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("sabr: nu must lie in (0, 1]");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("sabr: |rho| must be < 1");
    eta_ = 1.0 / nu;
    if (std::abs(eta_ * nu_ - 1.0) > 4.0 * std::numeric_limits<double>::epsilon())
        throw std::logic_error("sabr: eta * nu != 1");
    x0_ = std::log(z);
    rho_bar_ = std::sqrt(1.0 - rho * rho);
}

Vec LogNormalSabr::initial_state() const { return Vec{{x0_, sigma0_}}; }

VectorFieldSet LogNormalSabr::field_set() const {
    VectorFieldSet v;
    v.state_dim = 2;
    v.noise_dim = 2;
    v.epsilon = nu_;
    v.initial_state = initial_state();
    v.constant_skeleton = true;
    const double eta = eta_, rho = rho_, rho_bar = rho_bar_;
    v.drift = [eta](double eps, const Vec& x) { return Vec{{-eps * eta * x[1] * x[1] / 2.0, 0.0}}; };
    v.drift_eps_deriv_at_zero = [eta](const Vec& x) { return Vec{{-eta * x[1] * x[1] / 2.0, 0.0}}; };
    v.drift_jacobian_at_zero = [](const Vec&) { return Mat::Zero(2, 2).eval(); };
    v.diffusion.push_back([eta, rho](const Vec& x) { return Vec{{eta * x[1], rho * x[1]}}; });
    v.diffusion.push_back([rho_bar](const Vec& x) { return Vec{{0.0, rho_bar * x[1]}}; });
    v.diffusion_jacobian.push_back([eta, rho](const Vec&) { return Mat{{0.0, eta}, {0.0, rho}}; });
    v.diffusion_jacobian.push_back([rho_bar](const Vec&) { return Mat{{0.0, 0.0}, {0.0, rho_bar}}; });
    return v;
}

VectorFieldSet build_sabr(double z, double sigma0, double nu, double rho) {
    return LogNormalSabr(z, sigma0, nu, rho).field_set();
}

double PayoffSpec::underlying(double first_coordinate) const {
    return underlying_map == UnderlyingMap::Level ? first_coordinate : std::exp(first_coordinate);
}

double PayoffSpec::of_underlying(double u) const {
    switch (kind) {
    case PayoffKind::Call: return std::max(u - strike, 0.0);
    case PayoffKind::Put: return std::max(strike - u, 0.0);
    case PayoffKind::Identity: return u;
    }
    return 0.0;
}

double PayoffSpec::derivative(double first_coordinate) const {
    const double u = underlying(first_coordinate);
    const double du = underlying_map == UnderlyingMap::Level ? 1.0 : u;
    switch (kind) {
    case PayoffKind::Call: return u >= strike ? du : 0.0;
    case PayoffKind::Put: return u < strike ? -du : 0.0;
    case PayoffKind::Identity: return du;
    }
    return 0.0;
}

std::optional<double> PayoffSpec::kink() const {
    if (kind == PayoffKind::Identity) return std::nullopt;
    if (underlying_map == UnderlyingMap::Level) return strike;
    if (!(strike > 0.0)) return std::nullopt;
    return std::log(strike);
}

double PayoffSpec::kink_slope_jump() const {
    if (kind == PayoffKind::Identity) return 0.0;
    return underlying_map == UnderlyingMap::Level ? 1.0 : strike;
}

double eval_payoff(const PayoffSpec& payoff, std::span<const double> state) {
    return payoff(state[0]);
}

std::string to_string(PayoffKind kind) {
    switch (kind) {
    case PayoffKind::Call: return "call";
    case PayoffKind::Put: return "put";
    case PayoffKind::Identity: return "identity";
    }
    return "unknown";
}

} // namespace aew
