#pragma once

#include <cstddef>
#include <vector>

namespace aew {

/// Piecewise cubic Hermite interpolant on a uniform grid with Fritsch-Carlson
/// monotone slopes; extended linearly outside [front, back] with the end slopes.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(double lo, double hi, std::vector<double> values);

    double operator()(double x) const;

    std::size_t size() const { return values_.size(); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double step() const { return h_; }
    double node(std::size_t i) const { return lo_ + static_cast<double>(i) * h_; }
    double value(std::size_t i) const { return values_[i]; }
    double slope(std::size_t i) const { return slopes_[i]; }

    // Evaluation inside cell i (node(i) <= x <= node(i+1)) without locating it.
    double eval_in_cell(std::size_t i, double x) const;

private:
    double lo_ = 0.0, hi_ = 0.0, h_ = 0.0;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

} // namespace aew
