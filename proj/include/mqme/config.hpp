// config.hpp — JSON run configuration shared by the command-line subcommands

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqme/bath.hpp"
#include "mqme/bounds.hpp"
#include "mqme/dynamics.hpp"

namespace mqme {

enum class Mode { bounds, simulate, benchmark, verify };

Mode parse_mode(const std::string& s); // ConfigError on unknown names
std::string mode_name(Mode m);

struct GridSpec {
    std::string spacing = "log"; // "log" or "linear"
    double start = 1e-3;
    double stop = 1.0;
    int count = 100;

    void validate() const;
    std::vector<double> values() const; // start and stop included; a single point when count == 1
};

// Explicit bath: entries of the channel matrix in row-major order, each a list of modes.
struct BathSpec {
    double gamma = 0.1;
    double rate_normalization = 1.0;
    std::vector<std::vector<ExpMode>> entries;

    BathModel build() const;
};

struct BenchmarkSpec {
    std::vector<double> gammas{0.1, 0.01};
    double omega = 1.0;
    double eta = 5.5;
    int samples = 201;
};

struct SimulateSpec {
    double t_end = 20.0;
    int samples = 201;
};

struct Tolerances {
    double rel_tol = 1e-8;              // kernel quadrature
    double ode_rtol = 1e-9;
    double ode_atol = 1e-12;
    double cutoff_tolerance = 1e-8;     // pseudomode Fock-cutoff certification
    double term_budget = bounds::kDefaultTermBudget;
    double exponential_constant = bounds::kExponentialConstant;

    void validate() const;
    QuadConfig quad() const;
    ode::Options ode() const;
};

struct RunConfig {
    Mode mode = Mode::bounds;
    std::optional<BathSpec> bath; // simulate: explicit bath; otherwise the Lorentzian benchmark bath
    BenchmarkSpec benchmark;
    SimulateSpec simulate;
    std::optional<std::vector<bounds::Order>> orders; // unset: per-mode defaults
    GridSpec grid;
    Tolerances tolerances;
    std::string output = "out";
    std::uint64_t seed = 20240611;
    int threads = 0; // 0: machine parallelism

    // bounds: (1,1), (2,2), (m_exp, m_exp); simulate and benchmark: (1,1), (2,2)
    std::vector<bounds::Order> effective_orders() const;
    void validate() const;

    static RunConfig from_json(const nlohmann::json& j); // ConfigError on schema violations
    nlohmann::json to_json() const;
};

RunConfig load_config(const std::string& path);

} // namespace mqme
