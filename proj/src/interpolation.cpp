#include "aew/interpolation.hpp"

#include <cmath>
#include <stdexcept>

namespace aew {

MonotoneCubic::MonotoneCubic(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
    const std::size_t n = values_.size();
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("MonotoneCubic: need two nodes and hi > lo");
    h_ = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (values_[i + 1] - values_[i]) / h_;

    // Fourth-order central slopes (second order next to the ends), zeroed at
    // local extrema, then limited by the Fritsch-Carlson circle condition.
    slopes_.assign(n, 0.0);
    slopes_[0] = delta[0];
    slopes_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) continue;
        if (i >= 2 && i + 2 < n) {
            slopes_[i] = (values_[i - 2] - 8.0 * values_[i - 1] + 8.0 * values_[i + 1] - values_[i + 2]) / (12.0 * h_);
            if (slopes_[i] * delta[i] < 0.0) slopes_[i] = 0.0;
        } else {
            slopes_[i] = 0.5 * (delta[i - 1] + delta[i]);
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (delta[i] == 0.0) {
            slopes_[i] = slopes_[i + 1] = 0.0;
            continue;
        }
        const double a = slopes_[i] / delta[i];
        const double b = slopes_[i + 1] / delta[i];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            slopes_[i] = tau * a * delta[i];
            slopes_[i + 1] = tau * b * delta[i];
        }
    }
}

double MonotoneCubic::eval_in_cell(std::size_t i, double x) const {
    const double u = (x - node(i)) / h_;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * values_[i] + h_ * h10 * slopes_[i] + h01 * values_[i + 1] + h_ * h11 * slopes_[i + 1];
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t n = values_.size();
    if (x <= lo_) return values_[0] + slopes_[0] * (x - lo_);
    if (x >= hi_) return values_[n - 1] + slopes_[n - 1] * (x - hi_);
    std::size_t i = static_cast<std::size_t>((x - lo_) / h_);
    if (i > n - 2) i = n - 2;
    return eval_in_cell(i, x);
}

} // namespace aew
