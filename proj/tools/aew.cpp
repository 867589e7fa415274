// aew: weak approximation pricing, benchmarks and figure data as CSV.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aew/config.hpp"
#include "aew/experiments.hpp"
#include "aew/parallel.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
    std::string config;
    std::string out = "-";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "TOML run configuration")->required();
    cmd->add_option("--out", args.out, "CSV output file, '-' for stdout");
    cmd->add_option("--seed", args.seed, "Master seed; overrides mc.seed");
    cmd->add_option("--threads", args.threads, "Worker threads (default: AEW_THREADS or all cores)");
}

aew::RunConfig resolve(const CommonArgs& args) {
    aew::RunConfig config = aew::load_config(args.config);
    if (args.seed) {
        if (*args.seed > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw aew::ConfigError("--seed: must fit in a signed 64-bit integer");
        config.mc.seed = *args.seed;
    }
    if (args.threads > 0) aew::set_worker_threads(args.threads);
    return config;
}

// The resolved config goes to <out>.log (stderr for stdout output); it is a
// valid config file that reproduces the run.
void log_run(const CommonArgs& args, const std::string& command, const aew::RunConfig& config) {
    std::ostringstream log;
    log << "# aew " << command << "\n# master seed " << config.mc.seed << "\n# worker threads "
        << aew::worker_threads() << "\n"
        << config.to_toml();
    if (args.out == "-") {
        std::cerr << log.str();
        return;
    }
    std::ofstream file(args.out + ".log");
    file << log.str();
}

template <class Writer>
void emit(const CommonArgs& args, Writer&& write) {
    if (args.out == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ostringstream buffer;
    write(buffer);
    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + args.out);
    file << buffer.str();
    if (!file) throw std::runtime_error("write failed for " + args.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak approximation of perturbed SDEs by asymptotic expansion with Malliavin weights"};
    app.require_subcommand(1);

    CommonArgs price_args, figure_args, bench_args, sweep_args, conv_args;
    std::string figure_id;

    auto* price = app.add_subcommand("price", "Price the configured (m, n, gamma, strike) cells");
    add_common(price, price_args);
    price->add_flag("--timing", price_args.timing, "Record per-cell runtime_ms (output no longer reproducible)");

    auto* figure = app.add_subcommand("figure", "Emit the data series of a figure (F1..F8)");
    add_common(figure, figure_args);
    figure->add_option("--id", figure_id, "F1..F8")->required();

    auto* bench = app.add_subcommand("bench", "Euler-Maruyama benchmark prices");
    add_common(bench, bench_args);
    bench->add_flag("--timing", bench_args.timing, "Record runtime_ms");

    auto* sweep = app.add_subcommand("sweep-gamma", "Strike-summed squared error per time-grid gamma");
    add_common(sweep, sweep_args);

    auto* conv = app.add_subcommand("convergence", "Chain error against the PDE reference over n");
    add_common(conv, conv_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (price->parsed()) {
            const auto config = resolve(price_args);
            log_run(price_args, "price", config);
            const auto rows = aew::cmd_price(config);
            emit(price_args, [&](std::ostream& os) { aew::write_price_csv(os, rows, price_args.timing); });
        } else if (figure->parsed()) {
            const auto id = aew::parse_figure_id(figure_id);
            const auto config = resolve(figure_args);
            log_run(figure_args, "figure --id " + figure_id, config);
            const auto rows = aew::cmd_figure(config, id);
            emit(figure_args, [&](std::ostream& os) { aew::write_figure_csv(os, rows); });
        } else if (bench->parsed()) {
            const auto config = resolve(bench_args);
            log_run(bench_args, "bench", config);
            const auto rows = aew::cmd_bench(config);
            emit(bench_args, [&](std::ostream& os) { aew::write_price_csv(os, rows, bench_args.timing); });
        } else if (sweep->parsed()) {
            const auto config = resolve(sweep_args);
            log_run(sweep_args, "sweep-gamma", config);
            const auto rows = aew::cmd_sweep_gamma(config);
            emit(sweep_args, [&](std::ostream& os) { aew::write_gamma_csv(os, rows); });
        } else if (conv->parsed()) {
            const auto config = resolve(conv_args);
            log_run(conv_args, "convergence", config);
            const auto rows = aew::cmd_convergence(config);
            emit(conv_args, [&](std::ostream& os) { aew::write_convergence_csv(os, rows); });
        }
    } catch (const aew::ConfigError& e) {
        std::cerr << "aew: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "aew: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
