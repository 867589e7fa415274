#include "aew/gaussian_proxy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aew/rng.hpp"

namespace aew {

namespace {

struct SkeletonPath {
    std::vector<Vec> state;
    std::vector<Mat> jacobian;
    double dt = 0.0;
};

int rk4_steps(double t) {
    int steps = static_cast<int>(std::ceil(kSkeletonStepsPerUnitTime * t));
    if (steps < 2) steps = 2;
    if (steps % 2 != 0) ++steps;  // Simpson needs an even count
    return steps;
}

SkeletonPath integrate_skeleton(const VectorFieldSet& model, const Vec& x, double t) {
    const int steps = rk4_steps(t);
    SkeletonPath path;
    path.dt = t / steps;
    path.state.reserve(steps + 1);
    path.jacobian.reserve(steps + 1);
    Vec state = x;
    Mat jac = Mat::Identity(x.size(), x.size());
    path.state.push_back(state);
    path.jacobian.push_back(jac);
    const double h = path.dt;
    auto rhs = [&](const Vec& s, const Mat& j, Vec& ds, Mat& dj) {
        ds = model.drift(0.0, s);
        dj = model.drift_jacobian_at_zero(s) * j;
    };
    Vec k1s, k2s, k3s, k4s;
    Mat k1j, k2j, k3j, k4j;
    for (int i = 0; i < steps; ++i) {
        rhs(state, jac, k1s, k1j);
        rhs(state + 0.5 * h * k1s, jac + 0.5 * h * k1j, k2s, k2j);
        rhs(state + 0.5 * h * k2s, jac + 0.5 * h * k2j, k3s, k3j);
        rhs(state + h * k3s, jac + h * k3j, k4s, k4j);
        state += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        jac += h / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
        if (!state.allFinite() || !jac.allFinite())
            throw std::runtime_error("skeleton ODE integration produced non-finite values");
        path.state.push_back(state);
        path.jacobian.push_back(jac);
    }
    return path;
}

double simpson_weight(std::size_t i, std::size_t last) {
    if (i == 0 || i == last) return 1.0;
    return i % 2 == 1 ? 4.0 : 2.0;
}

Mat diffusion_outer(const VectorFieldSet& model, const Vec& x, const Mat& jinv) {
    Mat acc = Mat::Zero(x.size(), x.size());
    for (const auto& v : model.diffusion) {
        const Vec w = jinv * v(x);
        acc += w * w.transpose();
    }
    return acc;
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("proxy: t must be >= 0");
}

} // namespace

std::pair<Vec, Mat> skeleton_and_jacobian(const VectorFieldSet& model, const Vec& x, double t) {
    check_time(t);
    if (model.constant_skeleton || t == 0.0) return {x, Mat::Identity(x.size(), x.size())};
    const SkeletonPath path = integrate_skeleton(model, x, t);
    return {path.state.back(), path.jacobian.back()};
}

Vec mean_shift(const VectorFieldSet& model, const Vec& x, double t) {
    check_time(t);
    if (t == 0.0) return Vec::Zero(x.size());
    if (model.constant_skeleton) return t * model.drift_eps_deriv_at_zero(x);
    const SkeletonPath path = integrate_skeleton(model, x, t);
    const std::size_t last = path.state.size() - 1;
    Vec integral = Vec::Zero(x.size());
    for (std::size_t i = 0; i <= last; ++i) {
        const Mat jinv = path.jacobian[i].inverse();
        integral += simpson_weight(i, last) * (jinv * model.drift_eps_deriv_at_zero(path.state[i]));
    }
    integral *= path.dt / 3.0;
    return path.jacobian.back() * integral;
}

Mat covariance(const VectorFieldSet& model, const Vec& x, double t) {
    check_time(t);
    if (t == 0.0) return Mat::Zero(x.size(), x.size());
    if (model.constant_skeleton) {
        Mat a = diffusion_outer(model, x, Mat::Identity(x.size(), x.size()));
        return t * a;
    }
    const SkeletonPath path = integrate_skeleton(model, x, t);
    const std::size_t last = path.state.size() - 1;
    Mat integral = Mat::Zero(x.size(), x.size());
    for (std::size_t i = 0; i <= last; ++i) {
        const Mat jinv = path.jacobian[i].inverse();
        integral += simpson_weight(i, last) * diffusion_outer(model, path.state[i], jinv);
    }
    integral *= path.dt / 3.0;
    const Mat& jt = path.jacobian.back();
    Mat sigma = jt * integral * jt.transpose();
    return 0.5 * (sigma + sigma.transpose());
}

ProxyLaw proxy_law(const VectorFieldSet& model, const Vec& x, double t, double epsilon) {
    if (!(t > 0.0)) throw std::invalid_argument("proxy_law: t must be > 0");
    ProxyLaw law;
    std::tie(law.skeleton, law.jacobian) = skeleton_and_jacobian(model, x, t);
    law.mu = mean_shift(model, x, t);
    law.sigma = covariance(model, x, t);
    law.epsilon = epsilon;
    law.t = t;
    law.anchor = x;
    return law;
}

Mat proxy_cholesky(const ProxyLaw& law) {
    const Mat cov = law.covariance();
    const double trace = cov.trace();
    if (trace == 0.0) return Mat::Zero(cov.rows(), cov.cols());
    Eigen::LLT<Mat> llt(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    for (double ridge = 1e-14; ridge <= 1e-10 * 1.0000001; ridge *= 10.0) {
        llt.compute(cov + ridge * trace * Mat::Identity(cov.rows(), cov.cols()));
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw std::runtime_error("proxy covariance is not positive semidefinite");
}

Mat sample(const ProxyLaw& law, std::size_t count, std::uint64_t seed, std::uint64_t stream, Exec exec) {
    if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
    const Mat chol = proxy_cholesky(law);
    const Vec mean = law.mean();
    const int n = law.dim();
    Mat out(static_cast<Eigen::Index>(count), n);
    for_each_index(count, exec, [&](std::size_t i) {
        const NormalStream normals(seed, derive_stream(stream, i));
        Vec z(n);
        for (int k = 0; k < n; ++k) z[k] = normals(static_cast<std::uint64_t>(k));
        out.row(static_cast<Eigen::Index>(i)) = (mean + chol * z).transpose();
    });
    return out;
}

} // namespace aew
