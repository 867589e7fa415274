#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "aew/price_estimate.hpp"

namespace aew {

struct ErrorReportRow {
    double strike = 0.0;
    MethodTag method;
    double weak_price = 0.0;
    double benchmark_price = 0.0;
    double benchmark_se = 0.0;
    double error_rate_pct = 0.0;
    double abs_error = 0.0;
};

// 100 (weak - bench) / bench; throws std::domain_error for bench == 0.
double error_rate(double weak, double bench);

ErrorReportRow make_error_row(double strike, const PriceEstimate& weak, const PriceEstimate& bench);

// err * (n / (n + 1))^(m/2)
double predict_error_next_n(double err_mn, int m, int n);
// err * eps / sqrt(n)
double predict_error_next_m(double err_mn, double epsilon, int n);

// Least-squares slope of log(error) on log(n). Needs >= 3 points, errors > 0.
double convergence_slope(std::span<const std::pair<double, double>> points);

// Sum over strikes of the squared error for one gamma.
using GammaObjective = std::function<double(double gamma)>;

struct GammaSearch {
    double best_gamma = 0.0;
    std::vector<std::pair<double, double>> objective;  // (gamma, SSE) in grid order
};

// Grid argmin; ties resolve to the first grid point.
GammaSearch optimal_gamma(std::span<const double> gamma_grid, const GammaObjective& sse);

// Sum of squared errors of one method over strikes.
double sum_squared_errors(std::span<const double> weak, std::span<const double> bench);

// Coarse gamma set for the sweep, and the fine grid around the optimum.
std::vector<double> sweep_gamma_grid();
std::vector<double> fine_gamma_grid();

} // namespace aew
