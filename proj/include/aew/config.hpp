#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace aew {

// Invalid or missing configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelType { LocalVol, Sabr };
// Otm: puts below the spot, calls at and above it.
enum class PayoffFamily { Call, Put, Otm };
enum class PricingMode { Quadrature, Mc };

struct ModelConfig {
    ModelType type = ModelType::LocalVol;
    // local_vol
    double s0 = 0.0, beta = 0.0, epsilon = 0.0;
    // sabr (epsilon = nu)
    double z = 0.0, sigma0 = 0.0, nu = 0.0, rho = 0.0;

    double spot() const { return type == ModelType::LocalVol ? s0 : z; }
    double perturbation() const { return type == ModelType::LocalVol ? epsilon : nu; }
};

struct PayoffConfig {
    PayoffFamily family = PayoffFamily::Otm;
    std::vector<double> strikes;
};

struct MethodConfig {
    std::vector<int> orders;
    std::vector<int> steps;
    std::vector<double> gammas;
    PricingMode mode = PricingMode::Quadrature;
    int spatial_nodes = 801;
    int quadrature_nodes = 128;
};

struct McConfig {
    std::uint64_t seed = 0;
    std::uint64_t paths = 0;             // benchmark paths
    int benchmark_steps = 0;
    bool control_variate = true;
    std::uint64_t chain_paths = 0;       // outer paths of MC chains / SABR n = 2
};

struct GridConfig {
    double T = 0.0;
};

struct RunConfig {
    ModelConfig model;
    PayoffConfig payoff;
    MethodConfig method;
    McConfig mc;
    GridConfig grid;

    // Fully resolved TOML; parse_config(to_toml()) gives the same config back.
    std::string to_toml() const;
};

RunConfig parse_config(const std::string& toml_text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& file);

std::string to_string(ModelType t);
std::string to_string(PayoffFamily f);
std::string to_string(PricingMode m);

} // namespace aew
