#include "aew/chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "aew/gaussian_proxy.hpp"
#include "aew/quadrature.hpp"
#include "aew/rng.hpp"
#include "aew/weights.hpp"

namespace aew {

TimeGrid make_grid(const GridSpec& g) {
    if (g.n < 1) throw std::invalid_argument("make_grid: n must be >= 1");
    if (!(g.gamma > 0.0)) throw std::invalid_argument("make_grid: gamma must be positive");
    if (!(g.T > 0.0)) throw std::invalid_argument("make_grid: T must be positive");
    // Points are rounded to multiples of ulp(T): then every difference and every
    // partial sum of differences is exact, so the steps telescope with no rounding.
    const double quantum = std::nextafter(g.T, INFINITY) - g.T;
    TimeGrid grid;
    grid.t.resize(g.n + 1);
    grid.t[0] = 0.0;
    for (int k = 1; k < g.n; ++k) {
        const double raw = std::pow(static_cast<double>(k), g.gamma) * g.T / std::pow(g.n, g.gamma);
        grid.t[k] = std::round(raw / quantum) * quantum;
    }
    grid.t[g.n] = g.T;
    grid.s.resize(g.n);
    for (int k = 1; k <= g.n; ++k) {
        grid.s[k - 1] = grid.t[k] - grid.t[k - 1];
        if (!(grid.s[k - 1] > 0.0)) throw std::invalid_argument("make_grid: zero-length step");
    }
    return grid;
}

namespace {

// Points per Gauss-Legendre panel inside a grid cell and in the tails.
constexpr int kCellPoints = 6;
constexpr int kTailPoints = 16;

ProxyLaw local_law(const VectorFieldSet& fields, double x, double t) {
    return proxy_law(fields, Vec::Constant(1, x), t, fields.epsilon);
}

MethodTag chain_tag(int m, const GridSpec& g, const char* mode) { return {"AE-WA", m, g.n, g.gamma, mode}; }

double absorbed(const PayoffSpec& f, double y) { return f(std::max(y, 0.0)); }

// int_a^b g(y) phi(y; mean, sd) dy with panels no wider than max_width.
template <class G>
double panel_integral(G&& g, double a, double b, double mean, double sd, double max_width, int points) {
    if (!(b > a)) return 0.0;
    const auto& rule = gauss_legendre(points);
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        const double half = 0.5 * w, mid = lo + half;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double y = mid + half * rule.nodes[i];
            sum += half * rule.weights[i] * normal_pdf((y - mean) / sd) / sd * g(y);
        }
    }
    return sum;
}

// E[q(Y) M(Y)], Y ~ N(mean, sd^2), with q the interpolated level below the
// floor replaced by the absorbed payoff.
double integrate_level(const MonotoneCubic& q, const PayoffSpec& f, double floor, const LocalVolWeight& weight,
                       double mean, double sd) {
    const double a = mean - kGaussianTruncation * sd;
    const double b = mean + kGaussianTruncation * sd;
    const double tail_width = sd;
    double sum = 0.0;

    // Absorbed region, split at 0 and at the kink.
    if (a < floor) {
        std::vector<double> cuts{a};
        for (double c : {0.0, f.kink().value_or(a)})
            if (c > a && c < std::min(b, floor)) cuts.push_back(c);
        cuts.push_back(std::min(b, floor));
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
            sum += panel_integral([&](double y) { return absorbed(f, y) * weight(y); }, cuts[p], cuts[p + 1], mean,
                                  sd, tail_width, kTailPoints);
    }
    auto extrapolated = [&](double y) { return q(y) * weight(y); };
    // Linear extension between the floor and the first node.
    sum += panel_integral(extrapolated, std::max(a, floor), std::min(b, q.lo()), mean, sd, tail_width, kTailPoints);
    // Linear extension above the last node.
    sum += panel_integral(extrapolated, std::max(a, q.hi()), b, mean, sd, tail_width, kTailPoints);

    // Grid cells overlapping [a, b].
    const double h = q.step();
    const std::size_t cells = q.size() - 1;
    const double ya = std::max(a, q.lo()), yb = std::min(b, q.hi());
    if (yb > ya) {
        const auto& rule = gauss_legendre(kCellPoints);
        const int sub = std::max(1, static_cast<int>(std::ceil(4.0 * h / sd)));
        const std::size_t first = std::min(cells - 1, static_cast<std::size_t>((ya - q.lo()) / h));
        for (std::size_t c = first; c < cells; ++c) {
            const double lo = std::max(q.node(c), ya);
            const double hi = std::min(q.node(c + 1), yb);
            if (lo >= yb) break;
            if (!(hi > lo)) continue;
            const double w = (hi - lo) / sub;
            for (int p = 0; p < sub; ++p) {
                const double half = 0.5 * w, mid = lo + p * w + half;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    const double y = mid + half * rule.nodes[i];
                    sum += half * rule.weights[i] * normal_pdf((y - mean) / sd) / sd * q.eval_in_cell(c, y) *
                           weight(y);
                }
            }
        }
    }
    return sum;
}

struct SpatialGrid {
    double lo, hi;
    int nodes;
    double node(int i) const { return lo + (hi - lo) * i / (nodes - 1); }
};

SpatialGrid spatial_grid(const LocalVolCev& model, double T, int nodes) {
    const double half = kSpatialSpanSd * model.epsilon() * model.sigma(model.s0()) * std::sqrt(T);
    const double floor = kSpatialFloorFraction * model.s0();
    return {std::max(model.s0() - half, floor), model.s0() + half, nodes};
}

void check_order(int m) {
    if (m < 0 || m > 2) throw std::invalid_argument("chain: order must be 0, 1 or 2");
}

} // namespace

std::vector<MonotoneCubic> chain_levels_1d(const LocalVolCev& model, const PayoffSpec& payoff, const GridSpec& g,
                                           int m, const ChainOptions& options) {
    check_order(m);
    if (options.spatial_nodes < kMinSpatialNodes)
        throw std::invalid_argument("chain_price_1d: spatial grid needs at least " + std::to_string(kMinSpatialNodes) +
                                    " nodes");
    const TimeGrid grid = make_grid(g);
    const VectorFieldSet fields = model.field_set();
    const WeightFunction w = WeightFunction::local_vol(model, m);
    const SpatialGrid space = spatial_grid(model, g.T, options.spatial_nodes);
    const double floor = kSpatialFloorFraction * model.s0();

    std::vector<MonotoneCubic> levels;
    std::vector<double> values(space.nodes);
    // q_{n-1}: payoff integrated exactly against each node's proxy.
    const double s_last = grid.s[g.n - 1];
    for_each_index(space.nodes, options.exec, [&](std::size_t i) {
        values[i] = q_step_1d(local_law(fields, space.node(static_cast<int>(i)), s_last), w, payoff,
                              options.quadrature_nodes);
    });
    levels.emplace_back(space.lo, space.hi, values);
    for (int k = g.n - 1; k >= 2; --k) {
        const double s = grid.s[k - 1];
        const MonotoneCubic& next = levels.back();
        for_each_index(space.nodes, options.exec, [&](std::size_t i) {
            const double x = space.node(static_cast<int>(i));
            const LocalVolWeight weight(model, m, s, x);
            values[i] = integrate_level(next, payoff, floor, weight, x, std::sqrt(weight.proxy_variance()));
        });
        levels.emplace_back(space.lo, space.hi, values);
    }
    return levels;
}

PriceEstimate chain_price_1d(const LocalVolCev& model, const PayoffSpec& payoff, const GridSpec& g, int m,
                             const ChainOptions& options) {
    check_order(m);
    PriceEstimate e;
    e.method = chain_tag(m, g, "quadrature");
    const TimeGrid grid = make_grid(g);
    const double x0 = model.s0();
    if (g.n == 1) {
        e.value = q_step_1d(local_law(model.field_set(), x0, grid.s[0]), WeightFunction::local_vol(model, m), payoff,
                            options.quadrature_nodes);
        return e;
    }
    const auto levels = chain_levels_1d(model, payoff, g, m, options);
    const LocalVolWeight weight(model, m, grid.s[0], x0);
    e.value = integrate_level(levels.back(), payoff, kSpatialFloorFraction * model.s0(), weight, x0,
                              std::sqrt(weight.proxy_variance()));
    return e;
}

namespace {

struct NestedChain {
    const LocalVolCev& model;
    const PayoffSpec& payoff;
    const TimeGrid& grid;
    int m;
    std::uint64_t paths;
    std::uint64_t seed;
    double floor;

    // One weighted sample of q_{k-1} at anchor x: draw Y over step s_k, return q_k(Y) M(Y).
    double sample(int k, double x, std::uint64_t stream) const {
        const double s = grid.s[k - 1];
        const LocalVolWeight weight(model, m, s, x);
        const double y = x + std::sqrt(weight.proxy_variance()) * NormalStream(seed, stream)(0);
        return value(k, y, stream) * weight(y);
    }

    // q_k(y), estimated by fresh draws when k < n.
    double value(int k, double y, std::uint64_t stream) const {
        const int n = static_cast<int>(grid.s.size());
        if (k == n) return payoff(y);
        if (y < floor) return absorbed(payoff, y);
        double sum = 0.0;
        for (std::uint64_t j = 0; j < paths; ++j) sum += sample(k + 1, y, derive_stream(stream, j));
        return sum / static_cast<double>(paths);
    }
};

} // namespace

PriceEstimate chain_price_mc(const LocalVolCev& model, const PayoffSpec& payoff, const GridSpec& g, int m,
                             std::uint64_t paths_per_level, std::uint64_t seed, std::uint64_t stream, Exec exec) {
    check_order(m);
    if (g.n > kMaxNestedLevels)
        throw std::invalid_argument("chain_price_mc: nested Monte Carlo is limited to n <= 3; use chain_price_1d");
    if (paths_per_level < 2) throw std::invalid_argument("chain_price_mc: need at least two paths per level");
    const TimeGrid grid = make_grid(g);
    const NestedChain chain{model, payoff, grid, m, paths_per_level, seed, kSpatialFloorFraction * model.s0()};
    const auto sums = accumulate_sums<2>(paths_per_level, exec, [&](std::size_t i, std::array<double, 2>& acc) {
        const double v = chain.sample(1, model.s0(), derive_stream(stream, i));
        acc[0] += v;
        acc[1] += v * v;
    });
    return estimate_from_sums(sums[0], sums[1], paths_per_level, seed, chain_tag(m, g, "mc"));
}

PriceEstimate chain_price_sabr_n2(const LogNormalSabr& model, const PayoffSpec& payoff, const GridSpec& g,
                                  std::uint64_t paths, std::uint64_t seed, std::uint64_t stream, Exec exec) {
    if (g.n != 2) throw std::invalid_argument("chain_price_sabr_n2: grid must have n = 2");
    if (paths < kMinSabrChainPaths) throw std::invalid_argument("chain_price_sabr_n2: need at least 10^4 paths");
    const TimeGrid grid = make_grid(g);
    const double s1 = grid.s[0], s2 = grid.s[1];
    const Vec x0 = model.initial_state();
    const ProxyLaw law = proxy_law(model.field_set(), x0, s1, model.epsilon());
    const Vec mean = law.mean();
    const Mat chol = proxy_cholesky(law);
    const SabrTwoDimWeight outer(model, s1, x0[0], x0[1]);
    const WeightFunction inner_w = WeightFunction::sabr(model, SabrWeightKind::Marginal);

    const auto sums = accumulate_sums<2>(paths, exec, [&](std::size_t i, std::array<double, 2>& acc) {
        const NormalStream normals(seed, derive_stream(stream, i));
        const double z0 = normals(0), z1 = normals(1);
        const double y1 = mean[0] + chol(0, 0) * z0;
        const double y2 = mean[1] + chol(1, 0) * z0 + chol(1, 1) * z1;
        const double anchor[2] = {y1, y2};
        const double inner = q_step_1d(sabr_marginal_law(model, anchor, s2), inner_w, payoff);
        const double v = inner * outer(y1, y2);
        acc[0] += v;
        acc[1] += v * v;
    });
    return estimate_from_sums(sums[0], sums[1], paths, seed, {"AE-WA", 1, 2, g.gamma, "mc"});
}

} // namespace aew
