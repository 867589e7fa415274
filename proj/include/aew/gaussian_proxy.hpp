#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "aew/models.hpp"
#include "aew/parallel.hpp"

namespace aew {

/// Law of the first-order proxy  Xbar_t = X^0_t + eps * d/deps X_t |_{eps=0}:
/// Gaussian with mean skeleton + eps*mu and covariance eps^2 * sigma.
struct ProxyLaw {
    Vec skeleton;
    Mat jacobian;
    Vec mu;
    Mat sigma;
    double epsilon = 0.0;
    double t = 0.0;
    Vec anchor;

    Vec mean() const { return skeleton + epsilon * mu; }
    Mat covariance() const { return epsilon * epsilon * sigma; }
    int dim() const { return static_cast<int>(skeleton.size()); }
};

// RK4 steps per unit time for models with a moving skeleton.
inline constexpr int kSkeletonStepsPerUnitTime = 256;

std::pair<Vec, Mat> skeleton_and_jacobian(const VectorFieldSet& model, const Vec& x, double t);
Vec mean_shift(const VectorFieldSet& model, const Vec& x, double t);
Mat covariance(const VectorFieldSet& model, const Vec& x, double t);
ProxyLaw proxy_law(const VectorFieldSet& model, const Vec& x, double t, double epsilon);

// Lower Cholesky factor of eps^2 Sigma, with a rounding-level ridge when needed.
Mat proxy_cholesky(const ProxyLaw& law);

/// `count` draws (one per row). Draw i uses substream derive_stream(stream, i),
/// so the output does not depend on the thread count.
Mat sample(const ProxyLaw& law, std::size_t count, std::uint64_t seed, std::uint64_t stream,
           Exec exec = Exec::Parallel);

} // namespace aew
