#include "aew/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <toml.hpp>

namespace aew {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config: " + field + ": " + what);
}

const toml::table& section(const toml::table& root, const char* name) {
    const auto* t = root[name].as_table();
    if (!t) fail(name, "missing section [" + std::string(name) + "]");
    return *t;
}

double number(const toml::table& t, const std::string& sec, const char* key) {
    const auto node = t[key];
    if (!node) fail(sec + "." + key, "required");
    if (auto v = node.value<double>()) return *v;
    fail(sec + "." + key, "must be a number");
}

std::int64_t integer(const toml::table& t, const std::string& sec, const char* key) {
    const auto node = t[key];
    if (!node) fail(sec + "." + key, "required");
    if (auto v = node.value_exact<std::int64_t>()) return *v;
    fail(sec + "." + key, "must be an integer");
}

std::int64_t integer_or(const toml::table& t, const std::string& sec, const char* key, std::int64_t fallback) {
    return t[key] ? integer(t, sec, key) : fallback;
}

std::string text(const toml::table& t, const std::string& sec, const char* key) {
    const auto node = t[key];
    if (!node) fail(sec + "." + key, "required");
    if (auto v = node.value<std::string>()) return *v;
    fail(sec + "." + key, "must be a string");
}

template <class T>
std::vector<T> list(const toml::table& t, const std::string& sec, const char* key) {
    const auto* arr = t[key].as_array();
    if (!arr) fail(sec + "." + key, "required array");
    std::vector<T> out;
    for (const auto& el : *arr) {
        std::optional<T> v;
        if constexpr (std::is_integral_v<T>) {
            if (auto x = el.template value_exact<std::int64_t>()) v = static_cast<T>(*x);
        } else
            v = el.template value<T>();
        if (!v) fail(sec + "." + key, "array has an element of the wrong type");
        out.push_back(*v);
    }
    if (out.empty()) fail(sec + "." + key, "must not be empty");
    return out;
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) fail(field, what);
}

std::string fmt(double v) {
    // Shortest of %.15g / %.16g / %.17g that reads back exactly.
    char buf[64];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_integral_v<T>)
            s += std::to_string(v[i]);
        else
            s += fmt(v[i]);
    }
    return s + "]";
}

} // namespace

std::string to_string(ModelType t) { return t == ModelType::LocalVol ? "local_vol" : "sabr"; }

std::string to_string(PayoffFamily f) {
    switch (f) {
    case PayoffFamily::Call: return "call";
    case PayoffFamily::Put: return "put";
    case PayoffFamily::Otm: return "otm";
    }
    return "?";
}

std::string to_string(PricingMode m) { return m == PricingMode::Quadrature ? "quadrature" : "mc"; }

RunConfig parse_config(const std::string& toml_text, const std::string& source) {
    toml::table root;
    try {
        root = toml::parse(toml_text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "config: " << source << ":" << e.source().begin.line << ": " << e.description();
        throw ConfigError(os.str());
    }
    RunConfig c;

    const auto& model = section(root, "model");
    const std::string type = text(model, "model", "type");
    if (type == "local_vol") {
        c.model.type = ModelType::LocalVol;
        c.model.s0 = number(model, "model", "s0");
        c.model.beta = number(model, "model", "beta");
        c.model.epsilon = number(model, "model", "epsilon");
        require(c.model.s0 > 0.0, "model.s0", "must be positive");
        require(c.model.beta > 0.0 && c.model.beta <= 1.0, "model.beta", "must lie in (0, 1]");
        require(c.model.epsilon > 0.0 && c.model.epsilon <= 1.0, "model.epsilon", "must lie in (0, 1]");
    } else if (type == "sabr") {
        c.model.type = ModelType::Sabr;
        c.model.z = number(model, "model", "z");
        c.model.sigma0 = number(model, "model", "sigma0");
        c.model.nu = number(model, "model", "nu");
        c.model.rho = number(model, "model", "rho");
        require(c.model.z > 0.0, "model.z", "must be positive");
        require(c.model.sigma0 > 0.0, "model.sigma0", "must be positive");
        require(c.model.nu > 0.0 && c.model.nu <= 1.0, "model.nu", "must lie in (0, 1]");
        require(std::abs(c.model.rho) < 1.0, "model.rho", "must satisfy |rho| < 1");
    } else {
        fail("model.type", "unknown model '" + type + "' (expected local_vol or sabr)");
    }

    const auto& payoff = section(root, "payoff");
    const std::string kind = text(payoff, "payoff", "kind");
    if (kind == "call") c.payoff.family = PayoffFamily::Call;
    else if (kind == "put") c.payoff.family = PayoffFamily::Put;
    else if (kind == "otm") c.payoff.family = PayoffFamily::Otm;
    else fail("payoff.kind", "unknown payoff '" + kind + "' (expected call, put or otm)");
    c.payoff.strikes = list<double>(payoff, "payoff", "strikes");
    for (double k : c.payoff.strikes) require(k > 0.0, "payoff.strikes", "strikes must be positive");

    const auto& method = section(root, "method");
    c.method.orders = list<int>(method, "method", "orders");
    c.method.steps = list<int>(method, "method", "steps");
    c.method.gammas = list<double>(method, "method", "gammas");
    const std::string mode = text(method, "method", "mode");
    if (mode == "quadrature") c.method.mode = PricingMode::Quadrature;
    else if (mode == "mc") c.method.mode = PricingMode::Mc;
    else fail("method.mode", "unknown mode '" + mode + "' (expected quadrature or mc)");
    c.method.spatial_nodes = static_cast<int>(integer_or(method, "method", "spatial_nodes", 801));
    c.method.quadrature_nodes = static_cast<int>(integer_or(method, "method", "quadrature_nodes", 128));
    const int max_order = c.model.type == ModelType::LocalVol ? 2 : 1;
    for (int m : c.method.orders)
        require(m >= 0 && m <= max_order, "method.orders", "order out of range for " + type);
    for (int n : c.method.steps) require(n >= 1, "method.steps", "n must be >= 1");
    for (double g : c.method.gammas) require(g > 0.0, "method.gammas", "gamma must be positive");
    require(c.method.spatial_nodes >= 101, "method.spatial_nodes", "must be >= 101");
    require(c.method.quadrature_nodes >= 16, "method.quadrature_nodes", "must be >= 16");
    if (c.model.type == ModelType::LocalVol && c.method.mode == PricingMode::Mc)
        for (int n : c.method.steps) require(n <= 3, "method.steps", "nested Monte Carlo supports n <= 3");
    if (c.model.type == ModelType::Sabr)
        for (int n : c.method.steps) require(n <= 2, "method.steps", "SABR supports n = 1 or 2");

    const auto& mc = section(root, "mc");
    const auto seed = integer(mc, "mc", "seed");
    require(seed >= 0, "mc.seed", "must be non-negative");
    c.mc.seed = static_cast<std::uint64_t>(seed);
    const auto paths = integer(mc, "mc", "paths");
    require(paths >= 1000, "mc.paths", "must be >= 1000");
    c.mc.paths = static_cast<std::uint64_t>(paths);
    c.mc.benchmark_steps = static_cast<int>(integer(mc, "mc", "benchmark_steps"));
    require(c.mc.benchmark_steps >= 1, "mc.benchmark_steps", "must be >= 1");
    if (mc["control_variate"]) {
        const auto cv = mc["control_variate"].value<bool>();
        require(cv.has_value(), "mc.control_variate", "must be a boolean");
        c.mc.control_variate = *cv;
    }
    const auto chain_paths = integer_or(mc, "mc", "chain_paths", 100000);
    require(chain_paths >= 2, "mc.chain_paths", "must be >= 2");
    c.mc.chain_paths = static_cast<std::uint64_t>(chain_paths);

    const auto& grid = section(root, "grid");
    c.grid.T = number(grid, "grid", "T");
    require(c.grid.T > 0.0, "grid.T", "must be positive");
    return c;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config: cannot read " + file.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str(), file.string());
}

std::string RunConfig::to_toml() const {
    std::ostringstream os;
    os << "[model]\ntype = \"" << to_string(model.type) << "\"\n";
    if (model.type == ModelType::LocalVol) {
        os << "s0 = " << fmt(model.s0) << "\nbeta = " << fmt(model.beta) << "\nepsilon = " << fmt(model.epsilon)
           << "\n";
    } else {
        os << "z = " << fmt(model.z) << "\nsigma0 = " << fmt(model.sigma0) << "\nnu = " << fmt(model.nu)
           << "\nrho = " << fmt(model.rho) << "\n";
    }
    os << "\n[payoff]\nkind = \"" << to_string(payoff.family) << "\"\nstrikes = " << fmt_list(payoff.strikes) << "\n";
    os << "\n[method]\norders = " << fmt_list(method.orders) << "\nsteps = " << fmt_list(method.steps)
       << "\ngammas = " << fmt_list(method.gammas) << "\nmode = \"" << to_string(method.mode)
       << "\"\nspatial_nodes = " << method.spatial_nodes << "\nquadrature_nodes = " << method.quadrature_nodes << "\n";
    os << "\n[mc]\nseed = " << mc.seed << "\npaths = " << mc.paths << "\nbenchmark_steps = " << mc.benchmark_steps
       << "\ncontrol_variate = " << (mc.control_variate ? "true" : "false") << "\nchain_paths = " << mc.chain_paths
       << "\n";
    os << "\n[grid]\nT = " << fmt(grid.T) << "\n";
    return os.str();
}

} // namespace aew
