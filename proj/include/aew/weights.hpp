#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "aew/models.hpp"

namespace aew {

// Highest Hermite degree used by the implemented weights (h6 enters M^2).
inline constexpr int kMaxHermiteDegree = 6;

/// Hermite polynomial with variance parameter v:
/// h_0 = 1, h_1 = xi, h_{l+1} = xi h_l - l v h_{l-1}.
double hermite(int l, double xi, double v);

// All of h_0..h_max at once.
void hermite_all(int max_degree, double xi, double v, std::span<double> out);

/// E[ double Wiener-Ito integral | int q1 dB = xi ] = overlap * h2(xi; v) / v^2
double cond_exp_iter2(double overlap, double xi, double v);
/// E[ triple Wiener-Ito integral | int q1 dB = xi ] = overlap * h3(xi; v) / v^3
double cond_exp_iter3(double overlap, double xi, double v);

using ScalarIntegrand = std::function<double(double)>;

// int_0^t ( int_0^s q2 q1 du ) q3(s) q1(s) ds, scalar noise.
double nested_overlap2(const ScalarIntegrand& q1, const ScalarIntegrand& q2, const ScalarIntegrand& q3,
                       double t);
// int_0^t q4 q1 int_0^s q3 q1 int_0^u q2 q1 dr du ds, scalar noise.
double nested_overlap3(const ScalarIntegrand& q1, const ScalarIntegrand& q2, const ScalarIntegrand& q3,
                       const ScalarIntegrand& q4, double t);

/// Local volatility weight M^m(t, x, .) for a fixed anchor x and step t.
///
/// With xi = (y - x)/eps the first-order proxy coordinate, v = sigma(x)^2 t:
///   M^1 = 1 + eps sigma'/(2 sigma v) h3
///   M^2 = M^1 + eps^2 [ (sigma''/sigma + sigma'^2/sigma^2) h4 / (6 v)
///                     + sigma''/(4 sigma) h2
///                     + sigma'^2/(8 sigma^2 v^2) (h6 + 4 v h4 + 2 v^2 h2) ]
/// The h4/h2 pieces come from E[third-order term | xi]; the h6 group is the
/// double divergence of the squared second-order term.
class LocalVolWeight {
public:
    LocalVolWeight(const LocalVolCev& model, int order, double t, double x);

    double operator()(double y) const;

    int order() const { return order_; }
    double anchor() const { return anchor_; }
    // Variance of the proxy itself, eps^2 v.
    double proxy_variance() const { return epsilon_ * epsilon_ * v_; }

private:
    int order_;
    double anchor_;
    double epsilon_;
    double v_;
    double c3_ = 0.0;
    double c4_ = 0.0;
    double c2_ = 0.0;
    double c6group_ = 0.0;
};

/// Two-dimensional first-order SABR weight at anchor (x1, sigma), step t.
/// Arguments are proxy values (y1, y2) of (X1, sigma).
class SabrTwoDimWeight {
public:
    SabrTwoDimWeight(const LogNormalSabr& model, double t, double x1, double sigma);
    double operator()(double y1, double y2) const;

private:
    double epsilon_, eta_, rho_, sigma_, t_;
    double x1_;
    double mu1_;
    double p11_, p12_, p22_;
};

/// One-dimensional first-order SABR weight, conditioned on the log-spot only.
///   M = 1 + eps [ rho/(2 eta sigma) h3(g;v)/v - sigma rho t/2 h2(g;v)/v ],
/// g = (y - x1)/eps - mu1, v = eta^2 sigma^2 t.
class SabrMarginalWeight {
public:
    SabrMarginalWeight(const LogNormalSabr& model, double t, double x1, double sigma);
    double operator()(double y1) const;

private:
    double epsilon_, x1_, mu1_, v_;
    double c3_, c2_;
};

double weight_local_vol(int order, const LocalVolCev& model, double t, double x, double y);

enum class SabrWeightKind { TwoDim, Marginal };

// Marginal reads only y[0].
double weight_sabr(SabrWeightKind kind, const LogNormalSabr& model, double t, std::span<const double> x,
                   std::span<const double> y);

enum class WeightTag { LocalVolM0, LocalVolM1, LocalVolM2, SabrM1TwoDim, SabrM1Marginal };

/// Type-erased M^m(t, x, y) for one (model, order).
class WeightFunction {
public:
    static WeightFunction local_vol(const LocalVolCev& model, int order);
    static WeightFunction sabr(const LogNormalSabr& model, SabrWeightKind kind);
    // M^0 == 1 for any model.
    static WeightFunction unit();

    int order() const { return order_; }
    WeightTag tag() const { return tag_; }

    double eval(double t, std::span<const double> x, std::span<const double> y) const;

    // M(t, x, .) as a function of the first proxy coordinate; not for TwoDim.
    std::function<double(double)> kernel_1d(double t, std::span<const double> x) const;

private:
    int order_ = 0;
    WeightTag tag_ = WeightTag::LocalVolM0;
    std::function<double(double, std::span<const double>, std::span<const double>)> eval_;
    std::function<std::function<double(double)>(double, std::span<const double>)> kernel_;
};

/// Intervals of y (within mean +- span sd of the proxy) where M^m(t,x,y) < 0,
/// i.e. where the signed kernel M^m p^{Xbar} is negative.
std::vector<std::pair<double, double>> negative_weight_regions(const std::function<double(double)>& kernel,
                                                               double mean, double sd, double span = 8.0,
                                                               int samples = 4001);

} // namespace aew
