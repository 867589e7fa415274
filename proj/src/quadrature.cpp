#include "aew/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace aew {

namespace {

// Golub-Welsch eigenvalues, then Newton polish on the three-term recurrence.
QuadratureRule make_legendre(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = eig.eigenvalues()[i];
        double dp = 1.0;
        for (int iter = 0; iter < 3; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            x -= p1 / dp;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 1; k < n; ++k) {
            const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Orthonormal probabilists' Hermite values p_0..p_{n}; weight via Christoffel sum.
QuadratureRule make_hermite(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = eig.eigenvalues()[i];
        for (int iter = 0; iter < 3; ++iter) {
            // p_n and its derivative sqrt(n) p_{n-1}
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < n; ++k) {
                const double p2 = (x * p1 - std::sqrt(static_cast<double>(k)) * p0) / std::sqrt(k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            const double dp = std::sqrt(static_cast<double>(n)) * p0;
            if (dp == 0.0 || !std::isfinite(p1 / dp)) break;
            x -= p1 / dp;
        }
        double sum = 1.0, p0 = 1.0, p1 = x;
        sum += p1 * p1;
        for (int k = 1; k + 1 < n; ++k) {
            const double p2 = (x * p1 - std::sqrt(static_cast<double>(k)) * p0) / std::sqrt(k + 1.0);
            p0 = p1;
            p1 = p2;
            sum += p1 * p1;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / sum;
    }
    return rule;
}

const QuadratureRule& cached(int n, bool hermite) {
    static std::mutex mutex;
    static std::map<std::pair<int, bool>, std::unique_ptr<QuadratureRule>> cache;
    if (n < 1) throw std::invalid_argument("quadrature: need at least one node");
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, hermite}];
    if (!slot) slot = std::make_unique<QuadratureRule>(hermite ? make_hermite(n) : make_legendre(n));
    return *slot;
}

} // namespace

const QuadratureRule& gauss_legendre(int n) { return cached(n, false); }
const QuadratureRule& gauss_hermite(int n) { return cached(n, true); }

double gaussian_expectation(const std::function<double(double)>& g, double mean, double sd,
                            std::span<const double> breakpoints, int nodes) {
    if (!(sd > 0.0)) return g(mean);
    const double lo = mean - kGaussianTruncation * sd;
    const double hi = mean + kGaussianTruncation * sd;
    std::vector<double> cuts{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    if (cuts.size() == 1) {
        const auto& rule = gauss_hermite(nodes);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * g(mean + sd * rule.nodes[i]);
        return sum;
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    const auto& rule = gauss_legendre(nodes);
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        if (b <= a) continue;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double y = mid + half * rule.nodes[i];
            const double z = (y - mean) / sd;
            sum += half * rule.weights[i] * normal_pdf(z) / sd * g(y);
        }
    }
    return sum;
}

} // namespace aew
