#include "aew/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace aew {

double error_rate(double weak, double bench) {
    if (bench == 0.0) throw std::domain_error("error_rate: benchmark price is zero");
    return 100.0 * (weak - bench) / bench;
}

ErrorReportRow make_error_row(double strike, const PriceEstimate& weak, const PriceEstimate& bench) {
    ErrorReportRow row;
    row.strike = strike;
    row.method = weak.method;
    row.weak_price = weak.value;
    row.benchmark_price = bench.value;
    row.benchmark_se = bench.std_err;
    row.error_rate_pct = error_rate(weak.value, bench.value);
    row.abs_error = std::abs(weak.value - bench.value);
    return row;
}

double predict_error_next_n(double err_mn, int m, int n) {
    if (n < 1) throw std::invalid_argument("predict_error_next_n: n must be >= 1");
    return err_mn * std::pow(static_cast<double>(n) / (n + 1), 0.5 * m);
}

double predict_error_next_m(double err_mn, double epsilon, int n) {
    if (n < 1) throw std::invalid_argument("predict_error_next_m: n must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("predict_error_next_m: epsilon must be positive");
    return err_mn * epsilon / std::sqrt(static_cast<double>(n));
}

double convergence_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw std::invalid_argument("convergence_slope: need at least three points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [n, err] : points) {
        if (!(err > 0.0) || !(n > 0.0)) throw std::domain_error("convergence_slope: errors and n must be positive");
        const double x = std::log(n), y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(points.size());
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

GammaSearch optimal_gamma(std::span<const double> gamma_grid, const GammaObjective& sse) {
    if (gamma_grid.empty()) throw std::invalid_argument("optimal_gamma: empty grid");
    GammaSearch out;
    double best = INFINITY;
    for (double g : gamma_grid) {
        const double v = sse(g);
        out.objective.emplace_back(g, v);
        if (v < best) {
            best = v;
            out.best_gamma = g;
        }
    }
    return out;
}

double sum_squared_errors(std::span<const double> weak, std::span<const double> bench) {
    if (weak.size() != bench.size()) throw std::invalid_argument("sum_squared_errors: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < weak.size(); ++i) sum += (weak[i] - bench[i]) * (weak[i] - bench[i]);
    return sum;
}

std::vector<double> sweep_gamma_grid() { return {0.1, 0.33, 0.5, 1.0, 1.5, 2.0}; }

std::vector<double> fine_gamma_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.8 + 0.05 * i);
    return grid;
}

} // namespace aew
