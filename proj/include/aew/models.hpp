#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aew {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A perturbed SDE
///   dX = V0(eps, X) dt + eps * sum_j V_j(X) dB^j,   X_0 = initial_state,
/// described by its vector fields and the first derivatives the expansion needs.
struct VectorFieldSet {
    int state_dim = 0;
    int noise_dim = 0;
    double epsilon = 0.0;
    Vec initial_state;

    std::function<Vec(double, const Vec&)> drift;
    std::function<Vec(const Vec&)> drift_eps_deriv_at_zero;
    // d/dx V0(0, x); drives the variational (Jacobian) equation of the skeleton.
    std::function<Mat(const Vec&)> drift_jacobian_at_zero;
    std::vector<std::function<Vec(const Vec&)>> diffusion;
    std::vector<std::function<Mat(const Vec&)>> diffusion_jacobian;

    // True when V0(0, .) vanishes identically: skeleton is constant, J = I.
    bool constant_skeleton = false;
};

// Central differences; validation only, never used for pricing.
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& field, const Vec& x,
                               double relative_step = 1e-6);

/// dS = eps * s0^(1-beta) * S^beta dB on S > 0.
class LocalVolCev {
public:
    LocalVolCev(double s0, double beta, double epsilon);

    double s0() const { return s0_; }
    double beta() const { return beta_; }
    double epsilon() const { return epsilon_; }

    // Each throws std::domain_error for x <= 0.
    double sigma(double x) const;
    double sigma_prime(double x) const;
    double sigma_second(double x) const;

    VectorFieldSet field_set() const;

private:
    void check_domain(double x) const;

    double s0_;
    double beta_;
    double epsilon_;
    double scale_;  // s0^(1-beta)
};

VectorFieldSet build_local_vol(double s0, double beta, double epsilon);

/// Log-spot SABR in perturbed form, state (X1, sigma), eps = nu, eta = 1/nu:
///   dX1   = eps * (-eta sigma^2 / 2 dt + eta sigma dB1)
///   dsigma = eps * sigma (rho dB1 + sqrt(1 - rho^2) dB2)
class LogNormalSabr {
public:
    LogNormalSabr(double z, double sigma0, double nu, double rho);

    double z() const { return z_; }
    double sigma0() const { return sigma0_; }
    double nu() const { return nu_; }
    double rho() const { return rho_; }
    double eta() const { return eta_; }
    double epsilon() const { return nu_; }
    double x0() const { return x0_; }
    double rho_bar() const { return rho_bar_; }

    Vec initial_state() const;
    VectorFieldSet field_set() const;

private:
    double z_;
    double sigma0_;
    double nu_;
    double rho_;
    double eta_;
    double x0_;
    double rho_bar_;
};

VectorFieldSet build_sabr(double z, double sigma0, double nu, double rho);

enum class PayoffKind { Call, Put, Identity };
enum class UnderlyingMap { Level, ExpOfFirstCoordinate };

struct PayoffSpec {
    PayoffKind kind = PayoffKind::Call;
    double strike = 0.0;
    UnderlyingMap underlying_map = UnderlyingMap::Level;

    static PayoffSpec call(double k, UnderlyingMap map = UnderlyingMap::Level) {
        return {PayoffKind::Call, k, map};
    }
    static PayoffSpec put(double k, UnderlyingMap map = UnderlyingMap::Level) {
        return {PayoffKind::Put, k, map};
    }
    static PayoffSpec identity(UnderlyingMap map = UnderlyingMap::Level) {
        return {PayoffKind::Identity, 0.0, map};
    }

    // u = state_1 or exp(state_1)
    double underlying(double first_coordinate) const;
    double of_underlying(double u) const;
    // Payoff as a function of the first state coordinate.
    double operator()(double first_coordinate) const { return of_underlying(underlying(first_coordinate)); }

    // d/dx1 of the payoff (right derivative at the kink).
    double derivative(double first_coordinate) const;

    // Location of the kink in the first state coordinate, if any.
    std::optional<double> kink() const;
    // Jump of the first-coordinate derivative at the kink (d/dx1 payoff).
    double kink_slope_jump() const;
};

double eval_payoff(const PayoffSpec& payoff, std::span<const double> state);

std::string to_string(PayoffKind kind);

} // namespace aew
