#include "aew/weights.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "aew/quadrature.hpp"

namespace aew {

double hermite(int l, double xi, double v) {
    if (l < 0 || l > kMaxHermiteDegree) throw std::invalid_argument("hermite: unsupported degree");
    if (!(v > 0.0)) throw std::invalid_argument("hermite: variance parameter must be positive");
    if (l == 0) return 1.0;
    double prev = 1.0, cur = xi;
    for (int k = 1; k < l; ++k) {
        const double next = xi * cur - k * v * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void hermite_all(int max_degree, double xi, double v, std::span<double> out) {
    out[0] = 1.0;
    if (max_degree >= 1) out[1] = xi;
    for (int k = 1; k < max_degree; ++k) out[k + 1] = xi * out[k] - k * v * out[k - 1];
}

double cond_exp_iter2(double overlap, double xi, double v) {
    if (!(v > 0.0)) throw std::invalid_argument("cond_exp_iter2: v must be positive");
    return overlap * hermite(2, xi, v) / (v * v);
}

double cond_exp_iter3(double overlap, double xi, double v) {
    if (!(v > 0.0)) throw std::invalid_argument("cond_exp_iter3: v must be positive");
    return overlap * hermite(3, xi, v) / (v * v * v);
}

namespace {

constexpr int kOverlapNodes = 24;

template <class F>
double integrate(double a, double b, F&& f) {
    const auto& rule = gauss_legendre(kOverlapNodes);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

} // namespace

double nested_overlap2(const ScalarIntegrand& q1, const ScalarIntegrand& q2, const ScalarIntegrand& q3,
                       double t) {
    return integrate(0.0, t, [&](double s) {
        const double inner = integrate(0.0, s, [&](double u) { return q2(u) * q1(u); });
        return inner * q3(s) * q1(s);
    });
}

double nested_overlap3(const ScalarIntegrand& q1, const ScalarIntegrand& q2, const ScalarIntegrand& q3,
                       const ScalarIntegrand& q4, double t) {
    return integrate(0.0, t, [&](double s) {
        const double middle = integrate(0.0, s, [&](double u) {
            const double inner = integrate(0.0, u, [&](double r) { return q2(r) * q1(r); });
            return inner * q3(u) * q1(u);
        });
        return middle * q4(s) * q1(s);
    });
}

LocalVolWeight::LocalVolWeight(const LocalVolCev& model, int order, double t, double x)
    : order_(order), anchor_(x), epsilon_(model.epsilon()) {
    if (order < 0 || order > 2) throw std::invalid_argument("local vol weight: order must be 0, 1 or 2");
    if (!(t > 0.0)) throw std::invalid_argument("local vol weight: t must be positive");
    const double s = model.sigma(x);
    v_ = s * s * t;
    if (order == 0) return;
    const double s1 = model.sigma_prime(x);
    c3_ = s1 / (2.0 * s * v_);
    if (order == 1) return;
    const double s2 = model.sigma_second(x);
    c4_ = (s2 / s + s1 * s1 / (s * s)) / (6.0 * v_);
    c2_ = s2 / (4.0 * s);
    c6group_ = s1 * s1 / (8.0 * s * s * v_ * v_);
}

double LocalVolWeight::operator()(double y) const {
    if (order_ == 0) return 1.0;
    const double xi = (y - anchor_) / epsilon_;
    std::array<double, kMaxHermiteDegree + 1> h{};
    hermite_all(order_ == 1 ? 3 : 6, xi, v_, h);
    double w = 1.0 + epsilon_ * c3_ * h[3];
    if (order_ == 2) {
        const double squared = h[6] + 4.0 * v_ * h[4] + 2.0 * v_ * v_ * h[2];
        w += epsilon_ * epsilon_ * (c4_ * h[4] + c2_ * h[2] + c6group_ * squared);
    }
    return w;
}

SabrTwoDimWeight::SabrTwoDimWeight(const LogNormalSabr& model, double t, double x1, double sigma)
    : epsilon_(model.epsilon()), eta_(model.eta()), rho_(model.rho()), sigma_(sigma), t_(t), x1_(x1) {
    if (!(t > 0.0)) throw std::invalid_argument("sabr weight: t must be positive");
    if (sigma == 0.0) throw std::invalid_argument("sabr weight: anchor volatility must be non-zero");
    mu1_ = -eta_ * sigma * sigma * t / 2.0;
    const double s11 = eta_ * eta_ * sigma * sigma * t;
    const double s12 = eta_ * sigma * sigma * rho_ * t;
    const double s22 = sigma * sigma * t;
    const double det = s11 * s22 - s12 * s12;
    p11_ = s22 / det;
    p12_ = -s12 / det;
    p22_ = s11 / det;
}

double SabrTwoDimWeight::operator()(double y1, double y2) const {
    const double g1 = (y1 - x1_) / epsilon_ - mu1_;
    const double g2 = (y2 - sigma_) / epsilon_;
    const double u1 = p11_ * g1 + p12_ * g2;
    const double u2 = p12_ * g1 + p22_ * g2;
    // E[ (1/2) d2 X1 | g ] and E[ (1/2) d2 sigma | g ]
    const double a1 = -eta_ * sigma_ * t_ * g2 / 2.0 + g1 * g2 / (2.0 * sigma_) - eta_ * sigma_ * rho_ * t_ / 2.0;
    const double a2 = (g2 * g2 - sigma_ * sigma_ * t_) / (2.0 * sigma_);
    const double div1 = u1 * a1 - g2 / (2.0 * sigma_);
    const double div2 = u2 * a2 - g2 / sigma_;
    return 1.0 + epsilon_ * (div1 + div2);
}

SabrMarginalWeight::SabrMarginalWeight(const LogNormalSabr& model, double t, double x1, double sigma)
    : epsilon_(model.epsilon()), x1_(x1) {
    if (!(t > 0.0)) throw std::invalid_argument("sabr weight: t must be positive");
    if (sigma == 0.0) throw std::invalid_argument("sabr weight: anchor volatility must be non-zero");
    const double eta = model.eta(), rho = model.rho();
    mu1_ = -eta * sigma * sigma * t / 2.0;
    v_ = eta * eta * sigma * sigma * t;
    c3_ = rho / (2.0 * eta * sigma) / v_;
    c2_ = -sigma * rho * t / 2.0 / v_;
}

double SabrMarginalWeight::operator()(double y1) const {
    const double g = (y1 - x1_) / epsilon_ - mu1_;
    const double h2 = g * g - v_;
    const double h3 = g * g * g - 3.0 * v_ * g;
    return 1.0 + epsilon_ * (c3_ * h3 + c2_ * h2);
}

double weight_local_vol(int order, const LocalVolCev& model, double t, double x, double y) {
    return LocalVolWeight(model, order, t, x)(y);
}

double weight_sabr(SabrWeightKind kind, const LogNormalSabr& model, double t, std::span<const double> x,
                   std::span<const double> y) {
    if (kind == SabrWeightKind::Marginal) return SabrMarginalWeight(model, t, x[0], x[1])(y[0]);
    return SabrTwoDimWeight(model, t, x[0], x[1])(y[0], y[1]);
}

WeightFunction WeightFunction::local_vol(const LocalVolCev& model, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("local vol weight: order must be 0, 1 or 2");
    WeightFunction w;
    w.order_ = order;
    w.tag_ = order == 0 ? WeightTag::LocalVolM0 : order == 1 ? WeightTag::LocalVolM1 : WeightTag::LocalVolM2;
    w.eval_ = [model, order](double t, std::span<const double> x, std::span<const double> y) {
        if (order == 0) return 1.0;
        return LocalVolWeight(model, order, t, x[0])(y[0]);
    };
    w.kernel_ = [model, order](double t, std::span<const double> x) -> std::function<double(double)> {
        if (order == 0) return [](double) { return 1.0; };
        return LocalVolWeight(model, order, t, x[0]);
    };
    return w;
}

WeightFunction WeightFunction::sabr(const LogNormalSabr& model, SabrWeightKind kind) {
    WeightFunction w;
    w.order_ = 1;
    w.tag_ = kind == SabrWeightKind::TwoDim ? WeightTag::SabrM1TwoDim : WeightTag::SabrM1Marginal;
    w.eval_ = [model, kind](double t, std::span<const double> x, std::span<const double> y) {
        return weight_sabr(kind, model, t, x, y);
    };
    w.kernel_ = [model, kind](double t, std::span<const double> x) -> std::function<double(double)> {
        if (kind == SabrWeightKind::TwoDim)
            throw std::logic_error("two-dimensional weight has no one-dimensional kernel");
        return SabrMarginalWeight(model, t, x[0], x[1]);
    };
    return w;
}

WeightFunction WeightFunction::unit() {
    WeightFunction w;
    w.eval_ = [](double, std::span<const double>, std::span<const double>) { return 1.0; };
    w.kernel_ = [](double, std::span<const double>) -> std::function<double(double)> {
        return [](double) { return 1.0; };
    };
    return w;
}

double WeightFunction::eval(double t, std::span<const double> x, std::span<const double> y) const {
    return eval_(t, x, y);
}

std::function<double(double)> WeightFunction::kernel_1d(double t, std::span<const double> x) const {
    return kernel_(t, x);
}

std::vector<std::pair<double, double>> negative_weight_regions(const std::function<double(double)>& kernel,
                                                               double mean, double sd, double span,
                                                               int samples) {
    std::vector<std::pair<double, double>> regions;
    const double lo = mean - span * sd, step = 2.0 * span * sd / (samples - 1);
    bool inside = false;
    double start = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double y = lo + i * step;
        const bool negative = kernel(y) < 0.0;
        if (negative && !inside) {
            inside = true;
            start = y;
        } else if (!negative && inside) {
            inside = false;
            regions.emplace_back(start, y - step);
        }
    }
    if (inside) regions.emplace_back(start, lo + (samples - 1) * step);
    return regions;
}

} // namespace aew
