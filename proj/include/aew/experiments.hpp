#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "aew/analysis.hpp"
#include "aew/config.hpp"
#include "aew/models.hpp"
#include "aew/price_estimate.hpp"

namespace aew {

struct PriceRow {
    std::string model;
    std::string payoff;
    double strike = 0.0;
    std::string method;
    int m = 0;
    int n = 1;
    double gamma = 1.0;
    PriceEstimate estimate;
    double runtime_ms = 0.0;
};

struct FigureRow {
    std::string figure;
    std::string series;
    std::string payoff;
    int m = 0;
    int n = 1;
    double gamma = 1.0;
    ErrorReportRow error;
};

struct GammaRow {
    std::string model;
    int m = 0;
    int n = 1;
    double gamma = 1.0;
    double sse = 0.0;
    bool optimal = false;
};

struct ConvergenceRow {
    std::string model;
    std::string payoff;
    double strike = 0.0;
    int m = 0;
    int n = 1;
    double gamma = 1.0;
    double price = 0.0;
    double reference = 0.0;
    double abs_error = 0.0;
    double slope = 0.0;  // fitted over all n of the (m, strike) group; NaN if undefined
};

enum class FigureId { F1, F2, F3, F4, F5, F6, F7, F8 };

FigureId parse_figure_id(const std::string& id);  // throws ConfigError
std::string to_string(FigureId id);

// Call/put for a strike under the configured family; SABR payoffs act on exp(X1).
PayoffSpec payoff_for_strike(const RunConfig& config, double strike);

// Seed of cell `index` under the master seed.
std::uint64_t cell_seed(std::uint64_t master, std::uint64_t index);

/// Prices every (m, n, gamma, strike) cell of the config; rows in cell order.
std::vector<PriceRow> cmd_price(const RunConfig& config);

/// Euler-Maruyama benchmark for every strike (one simulation).
std::vector<PriceRow> cmd_bench(const RunConfig& config);

/// Data series of one figure (F1..F8) as error rates against the benchmark.
std::vector<FigureRow> cmd_figure(const RunConfig& config, FigureId id);

/// Strike-summed squared error per gamma for every (m, n); one optimal row per (m, n).
/// With a single configured gamma the grid is the coarse sweep set plus 0.8..1.3 step 0.05.
std::vector<GammaRow> cmd_sweep_gamma(const RunConfig& config);

/// Chain error against the PDE reference over the configured n (local vol only).
std::vector<ConvergenceRow> cmd_convergence(const RunConfig& config);

extern const char* const kPriceCsvHeader;
extern const char* const kFigureCsvHeader;
extern const char* const kGammaCsvHeader;
extern const char* const kConvergenceCsvHeader;

// runtime_ms is written as 0 unless `timing` is set, so reruns compare byte for byte.
void write_price_csv(std::ostream& os, const std::vector<PriceRow>& rows, bool timing = false);
void write_figure_csv(std::ostream& os, const std::vector<FigureRow>& rows);
void write_gamma_csv(std::ostream& os, const std::vector<GammaRow>& rows);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

} // namespace aew
