#include "aew/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "aew/benchmark.hpp"
#include "aew/chain.hpp"
#include "aew/parallel.hpp"
#include "aew/pricer.hpp"
#include "aew/reference.hpp"
#include "aew/rng.hpp"

namespace aew {

const char* const kPriceCsvHeader = "model,payoff,strike,method,m,n,gamma,price,std_err,paths,seed,runtime_ms";
const char* const kFigureCsvHeader =
    "figure,series,strike,payoff,m,n,gamma,weak_price,benchmark_price,benchmark_se,error_rate_pct,abs_error";
const char* const kGammaCsvHeader = "model,m,n,gamma,sse,optimal";
const char* const kConvergenceCsvHeader = "model,payoff,strike,m,n,gamma,price,reference,abs_error,slope";

namespace {

// Benchmark substream key under the master seed; far from any cell index.
constexpr std::uint64_t kBenchmarkCell = 0xBE7C0000ull;

LocalVolCev local_vol_of(const RunConfig& c) { return {c.model.s0, c.model.beta, c.model.epsilon}; }
LogNormalSabr sabr_of(const RunConfig& c) { return {c.model.z, c.model.sigma0, c.model.nu, c.model.rho}; }

std::string payoff_name(const PayoffSpec& p) { return to_string(p.kind); }

std::vector<PayoffSpec> strike_payoffs(const RunConfig& c) {
    std::vector<PayoffSpec> out;
    for (double k : c.payoff.strikes) out.push_back(payoff_for_strike(c, k));
    return out;
}

void require_model(const RunConfig& c, ModelType t, const std::string& what) {
    if (c.model.type != t) throw ConfigError("config: model.type: " + what + " needs model type " + to_string(t));
}

std::vector<PriceEstimate> benchmark(const RunConfig& c, const std::vector<PayoffSpec>& payoffs) {
    const std::uint64_t seed = cell_seed(c.mc.seed, kBenchmarkCell);
    const EmOptions options{c.mc.control_variate};
    if (c.model.type == ModelType::LocalVol)
        return em_price(local_vol_of(c), payoffs, c.grid.T, c.mc.benchmark_steps, c.mc.paths, seed, 0,
                        Exec::Parallel, options);
    return em_price(sabr_of(c), payoffs, c.grid.T, c.mc.benchmark_steps, c.mc.paths, seed, 0, Exec::Parallel,
                    options);
}

std::string method_name(const RunConfig& c, int n) {
    if (c.model.type == ModelType::LocalVol)
        return c.method.mode == PricingMode::Quadrature ? "chain-quadrature" : "chain-mc";
    if (n == 2) return "sabr-n2";
    return c.method.mode == PricingMode::Quadrature ? "sabr-marginal-quadrature" : "sabr-twodim-mc";
}

// One weak-approximation price: Q^m chain with n steps on the gamma grid.
PriceEstimate weak_price(const RunConfig& c, const PayoffSpec& payoff, int m, int n, double gamma,
                         std::uint64_t seed) {
    const GridSpec g{n, gamma, c.grid.T};
    if (c.model.type == ModelType::LocalVol) {
        const LocalVolCev lv = local_vol_of(c);
        if (c.method.mode == PricingMode::Quadrature) {
            ChainOptions options;
            options.spatial_nodes = c.method.spatial_nodes;
            options.quadrature_nodes = c.method.quadrature_nodes;
            return chain_price_1d(lv, payoff, g, m, options);
        }
        return chain_price_mc(lv, payoff, g, m, c.mc.chain_paths, seed);
    }
    const LogNormalSabr sabr = sabr_of(c);
    if (n == 1) {
        const double x[2] = {sabr.x0(), sabr.sigma0()};
        const auto mode =
            c.method.mode == PricingMode::Quadrature ? SabrStepMode::MarginalQuadrature : SabrStepMode::TwoDimMc;
        if (mode == SabrStepMode::TwoDimMc && c.mc.chain_paths < kMinSabrStepPaths)
            throw ConfigError("config: mc.chain_paths: two-dimensional Monte Carlo needs >= 1000 paths");
        return q_step_sabr(sabr, x, c.grid.T, payoff, m, mode, c.mc.chain_paths, seed);
    }
    if (n != 2) throw ConfigError("config: method.steps: SABR supports n = 1 or 2");
    if (m != 1) throw ConfigError("config: method.orders: the SABR n = 2 scheme is first order");
    if (c.mc.chain_paths < kMinSabrChainPaths)
        throw ConfigError("config: mc.chain_paths: the SABR n = 2 scheme needs >= 10000 paths");
    return chain_price_sabr_n2(sabr, payoff, g, c.mc.chain_paths, seed);
}

struct Series {
    std::string name;
    int m;
    int n;
    double gamma;
};

std::string gamma_label(double g) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "gamma=%.2f", g);
    return buf;
}

// Evaluates every (series, strike) cell against a shared benchmark.
std::vector<FigureRow> series_rows(const RunConfig& c, FigureId id, const std::vector<Series>& series,
                                   const std::vector<PayoffSpec>& payoffs, const std::vector<PriceEstimate>& bench) {
    const std::size_t ns = payoffs.size();
    std::vector<FigureRow> rows(series.size() * ns);
    for_each_index(rows.size(), Exec::Parallel, [&](std::size_t cell) {
        const Series& s = series[cell / ns];
        const std::size_t k = cell % ns;
        const PriceEstimate w = weak_price(c, payoffs[k], s.m, s.n, s.gamma, cell_seed(c.mc.seed, cell));
        FigureRow& r = rows[cell];
        r.figure = to_string(id);
        r.series = s.name;
        r.payoff = payoff_name(payoffs[k]);
        r.m = s.m;
        r.n = s.n;
        r.gamma = s.gamma;
        r.error = make_error_row(payoffs[k].strike, w, bench[k]);
    });
    return rows;
}

// Adds a predicted series: weak = benchmark + predicted error of `base`.
void add_prediction(std::vector<FigureRow>& rows, const std::string& base, const std::string& name, int m, int n,
                    const std::function<double(double)>& predict) {
    std::vector<FigureRow> extra;
    for (const FigureRow& r : rows) {
        if (r.series != base) continue;
        FigureRow p = r;
        p.series = name;
        p.m = m;
        p.n = n;
        const double err = predict(r.error.weak_price - r.error.benchmark_price);
        p.error.weak_price = r.error.benchmark_price + err;
        p.error.error_rate_pct = error_rate(p.error.weak_price, r.error.benchmark_price);
        p.error.abs_error = std::abs(err);
        p.error.method = {"Theory", m, n, r.gamma, "predicted"};
        extra.push_back(p);
    }
    rows.insert(rows.end(), extra.begin(), extra.end());
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

FigureId parse_figure_id(const std::string& id) {
    static const char* names[] = {"F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8"};
    for (int i = 0; i < 8; ++i)
        if (id == names[i]) return static_cast<FigureId>(i);
    throw ConfigError("figure id '" + id + "' is not one of F1..F8");
}

std::string to_string(FigureId id) { return "F" + std::to_string(static_cast<int>(id) + 1); }

PayoffSpec payoff_for_strike(const RunConfig& c, double strike) {
    const UnderlyingMap map =
        c.model.type == ModelType::LocalVol ? UnderlyingMap::Level : UnderlyingMap::ExpOfFirstCoordinate;
    bool call = c.payoff.family == PayoffFamily::Call;
    if (c.payoff.family == PayoffFamily::Otm) call = strike >= c.model.spot();
    return call ? PayoffSpec::call(strike, map) : PayoffSpec::put(strike, map);
}

std::uint64_t cell_seed(std::uint64_t master, std::uint64_t index) { return derive_stream(master, index); }

std::vector<PriceRow> cmd_price(const RunConfig& c) {
    struct Cell {
        int m, n;
        double gamma;
        std::size_t k;
    };
    std::vector<Cell> cells;
    for (int m : c.method.orders)
        for (int n : c.method.steps)
            for (double g : c.method.gammas)
                for (std::size_t k = 0; k < c.payoff.strikes.size(); ++k) cells.push_back({m, n, g, k});
    const auto payoffs = strike_payoffs(c);
    std::vector<PriceRow> rows(cells.size());
    for_each_index(cells.size(), Exec::Parallel, [&](std::size_t i) {
        const Cell& cell = cells[i];
        const auto start = std::chrono::steady_clock::now();
        PriceRow& r = rows[i];
        r.estimate = weak_price(c, payoffs[cell.k], cell.m, cell.n, cell.gamma, cell_seed(c.mc.seed, i));
        r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        r.model = to_string(c.model.type);
        r.payoff = payoff_name(payoffs[cell.k]);
        r.strike = payoffs[cell.k].strike;
        r.method = method_name(c, cell.n);
        r.m = cell.m;
        r.n = cell.n;
        r.gamma = cell.gamma;
    });
    return rows;
}

std::vector<PriceRow> cmd_bench(const RunConfig& c) {
    const auto payoffs = strike_payoffs(c);
    const auto start = std::chrono::steady_clock::now();
    const auto prices = benchmark(c, payoffs);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::vector<PriceRow> rows;
    for (std::size_t k = 0; k < payoffs.size(); ++k) {
        PriceRow r;
        r.model = to_string(c.model.type);
        r.payoff = payoff_name(payoffs[k]);
        r.strike = payoffs[k].strike;
        r.method = c.mc.control_variate ? "benchmark-em-cv" : "benchmark-em";
        r.m = 0;
        r.n = c.mc.benchmark_steps;
        r.gamma = 1.0;
        r.estimate = prices[k];
        r.runtime_ms = ms;
        rows.push_back(r);
    }
    return rows;
}

std::vector<FigureRow> cmd_figure(const RunConfig& c, FigureId id) {
    const bool sabr = id == FigureId::F3 || id == FigureId::F4;
    require_model(c, sabr ? ModelType::Sabr : ModelType::LocalVol, "figure " + to_string(id));
    const auto payoffs = strike_payoffs(c);
    const auto bench = benchmark(c, payoffs);

    std::vector<Series> series;
    switch (id) {
    case FigureId::F1:
    case FigureId::F2:
        series = {{"AE1", 1, 1, 1.0},
                  {"AE1-WA n=2", 1, 2, 1.0},
                  {"AE1-WA n=3", 1, 3, 1.0},
                  {"AE2", 2, 1, 1.0},
                  {"AE2-WA n=2", 2, 2, 1.0}};
        break;
    case FigureId::F3:
    case FigureId::F4:
        series = {{"AE1", 1, 1, 1.0}, {"AE1-WA n=2", 1, 2, 1.0}};
        break;
    case FigureId::F5:
        series = {{"Error AE1-WA n=2", 1, 2, 1.0}, {"Error AE1-WA n=3", 1, 3, 1.0}};
        break;
    case FigureId::F6:
        series = {{"Error AE1-WA n=2", 1, 2, 1.0}, {"Error AE2-WA n=2", 2, 2, 1.0}};
        break;
    case FigureId::F7:
    case FigureId::F8:
        for (double g : sweep_gamma_grid()) series.push_back({gamma_label(g), 1, id == FigureId::F7 ? 2 : 3, g});
        break;
    }
    auto rows = series_rows(c, id, series, payoffs, bench);
    if (id == FigureId::F5)
        add_prediction(rows, "Error AE1-WA n=2", "Theory AE1-WA n=3", 1, 3,
                       [](double e) { return predict_error_next_n(e, 1, 2); });
    if (id == FigureId::F6) {
        const double eps = c.model.perturbation();
        add_prediction(rows, "Error AE1-WA n=2", "Theory AE2-WA n=2", 2, 2,
                       [eps](double e) { return predict_error_next_m(e, eps, 2); });
    }
    return rows;
}

std::vector<GammaRow> cmd_sweep_gamma(const RunConfig& c) {
    std::vector<double> grid = c.method.gammas;
    if (grid.size() == 1) {
        grid = sweep_gamma_grid();
        for (double g : fine_gamma_grid()) grid.push_back(g);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                   grid.end());
    }
    const auto payoffs = strike_payoffs(c);
    const auto bench = benchmark(c, payoffs);
    std::vector<double> bench_values;
    for (const auto& b : bench) bench_values.push_back(b.value);

    struct Cell {
        int m, n;
        std::size_t g, k;
    };
    std::vector<Cell> cells;
    for (int m : c.method.orders)
        for (int n : c.method.steps)
            for (std::size_t g = 0; g < grid.size(); ++g)
                for (std::size_t k = 0; k < payoffs.size(); ++k) cells.push_back({m, n, g, k});
    std::vector<double> prices(cells.size());
    for_each_index(cells.size(), Exec::Parallel, [&](std::size_t i) {
        const Cell& cell = cells[i];
        prices[i] = weak_price(c, payoffs[cell.k], cell.m, cell.n, grid[cell.g], cell_seed(c.mc.seed, i)).value;
    });

    std::vector<GammaRow> rows;
    const std::size_t nk = payoffs.size();
    std::size_t block = 0;
    for (int m : c.method.orders) {
        for (int n : c.method.steps) {
            const std::size_t base = block * grid.size() * nk;
            const auto search = optimal_gamma(grid, [&](double g) {
                const auto gi = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), g) - grid.begin());
                return sum_squared_errors(std::span<const double>(prices.data() + base + gi * nk, nk), bench_values);
            });
            for (const auto& [g, sse] : search.objective)
                rows.push_back({to_string(c.model.type), m, n, g, sse, g == search.best_gamma});
            ++block;
        }
    }
    return rows;
}

std::vector<ConvergenceRow> cmd_convergence(const RunConfig& c) {
    require_model(c, ModelType::LocalVol, "convergence");
    const LocalVolCev lv = local_vol_of(c);
    const auto payoffs = strike_payoffs(c);
    const double gamma = c.method.gammas.front();
    std::vector<double> reference(payoffs.size());
    for_each_index(payoffs.size(), Exec::Parallel,
                   [&](std::size_t k) { reference[k] = pde_price_local_vol(lv, payoffs[k], c.grid.T); });

    struct Cell {
        int m, n;
        std::size_t k;
    };
    std::vector<Cell> cells;
    for (int m : c.method.orders)
        for (std::size_t k = 0; k < payoffs.size(); ++k)
            for (int n : c.method.steps) cells.push_back({m, n, k});
    std::vector<ConvergenceRow> rows(cells.size());
    for_each_index(cells.size(), Exec::Parallel, [&](std::size_t i) {
        const Cell& cell = cells[i];
        ConvergenceRow& r = rows[i];
        r.model = to_string(c.model.type);
        r.payoff = payoff_name(payoffs[cell.k]);
        r.strike = payoffs[cell.k].strike;
        r.m = cell.m;
        r.n = cell.n;
        r.gamma = gamma;
        r.price = weak_price(c, payoffs[cell.k], cell.m, cell.n, gamma, cell_seed(c.mc.seed, i)).value;
        r.reference = reference[cell.k];
        r.abs_error = std::abs(r.price - r.reference);
    });
    const std::size_t group = c.method.steps.size();
    for (std::size_t start = 0; start < rows.size(); start += group) {
        std::vector<std::pair<double, double>> points;
        bool ok = group >= 3;
        for (std::size_t j = start; j < start + group; ++j) {
            points.emplace_back(rows[j].n, rows[j].abs_error);
            ok = ok && rows[j].abs_error > 0.0;
        }
        const double slope = ok ? convergence_slope(points) : std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = start; j < start + group; ++j) rows[j].slope = slope;
    }
    return rows;
}

void write_price_csv(std::ostream& os, const std::vector<PriceRow>& rows, bool timing) {
    os << kPriceCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.model << ',' << r.payoff << ',' << fmt(r.strike) << ',' << r.method << ',' << r.m << ',' << r.n << ','
           << fmt(r.gamma) << ',' << fmt(r.estimate.value) << ',' << fmt(r.estimate.std_err) << ','
           << r.estimate.paths << ',' << r.estimate.seed << ',' << (timing ? fmt(r.runtime_ms) : "0") << '\n';
    }
}

void write_figure_csv(std::ostream& os, const std::vector<FigureRow>& rows) {
    os << kFigureCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.figure << ',' << r.series << ',' << fmt(r.error.strike) << ',' << r.payoff << ',' << r.m << ','
           << r.n << ',' << fmt(r.gamma) << ',' << fmt(r.error.weak_price) << ',' << fmt(r.error.benchmark_price)
           << ',' << fmt(r.error.benchmark_se) << ',' << fmt(r.error.error_rate_pct) << ',' << fmt(r.error.abs_error)
           << '\n';
    }
}

void write_gamma_csv(std::ostream& os, const std::vector<GammaRow>& rows) {
    os << kGammaCsvHeader << '\n';
    for (const auto& r : rows)
        os << r.model << ',' << r.m << ',' << r.n << ',' << fmt(r.gamma) << ',' << fmt(r.sse) << ','
           << (r.optimal ? 1 : 0) << '\n';
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << kConvergenceCsvHeader << '\n';
    for (const auto& r : rows)
        os << r.model << ',' << r.payoff << ',' << fmt(r.strike) << ',' << r.m << ',' << r.n << ',' << fmt(r.gamma)
           << ',' << fmt(r.price) << ',' << fmt(r.reference) << ',' << fmt(r.abs_error) << ',' << fmt(r.slope)
           << '\n';
}

} // namespace aew
