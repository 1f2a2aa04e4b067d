// commands.cpp — subcommand drivers and deterministic CSV / JSON emission

#include "mqme/commands.hpp"

#include <exception>
#include <ostream>

#include <omp.h>

#include "mqme/acceptance.hpp"
#include "mqme/errors.hpp"
#include "mqme/io.hpp"
#include "mqme/kernels.hpp"

#ifndef MQME_VERSION
#define MQME_VERSION "0.0.0"
#endif

namespace mqme {

using nlohmann::json;

namespace {

using io::format_double;

std::string order_tag(int m, int n) { return "m" + std::to_string(m) + "_n" + std::to_string(n); }

double tight_normalized(int m, int n, double gamma_tau, double budget) {
    const auto v = bounds::xi_bound_tight(m, n, 1.0, bounds::MomentSequence::exponential(gamma_tau, m + n), budget);
    if (!v) throw ToleranceError("tight bound for the benchmark order exceeds the term budget");
    return *v;
}

} // namespace

std::string tool_version() { return MQME_VERSION; }

void write_with_sidecar(const RunConfig& cfg, const std::string& name, const std::string& text, const json& extra) {
    const std::filesystem::path dir(cfg.output);
    io::write_text(dir / name, text);
    json meta;
    meta["file"] = name;
    meta["tool"] = "mqme";
    meta["version"] = tool_version();
    meta["config"] = cfg.to_json();
    meta["tolerances"] = cfg.to_json()["tolerances"];
    meta["metadata"] = extra;
    io::write_text(dir / (name + ".meta.json"), meta.dump(2) + "\n");
}

int run_bounds(const RunConfig& cfg, std::ostream& log) {
    const auto grid = cfg.grid.values();
    bounds::SweepOptions opt;
    opt.term_budget = cfg.tolerances.term_budget;
    opt.exponential_constant = cfg.tolerances.exponential_constant;
    opt.threads = cfg.threads;
    const auto reports = bounds::bound_sweep(grid, cfg.effective_orders(), opt);
    write_with_sidecar(cfg, "bounds.csv", bounds::sweep_csv(reports),
                       {{"rows", reports.size()}, {"x_axis", "gamma_tau"}, {"y_unit", "bound / Gamma"}});
    log << "bounds: " << reports.size() << " rows written to " << (std::filesystem::path(cfg.output) / "bounds.csv").string()
        << "\n";
    return kExitOk;
}

int run_simulate(const RunConfig& cfg, std::ostream& log) {
    const BathModel bath = cfg.bath ? cfg.bath->build()
                                    : lorentzian_bath(cfg.benchmark.gammas.front(), cfg.benchmark.omega, cfg.benchmark.eta);
    if (bath.channel_count() != 1) throw ConfigError("simulate drives a single spin coupled through sigma_x: one channel");
    const SystemModel sys = spin_boson_system(cfg.benchmark.omega);
    std::vector<double> times(cfg.simulate.samples);
    for (int i = 0; i < cfg.simulate.samples; ++i) times[i] = cfg.simulate.t_end * i / (cfg.simulate.samples - 1);
    times.back() = cfg.simulate.t_end;
    const KernelEvaluator ev(sys, bath, 0.0, cfg.tolerances.quad());
    for (const auto& o : cfg.effective_orders()) {
        const Trajectory tr = propagate_mqme(ev, o.m, o.n, pauli::up(), times, cfg.tolerances.ode());
        std::string csv = "t,trace,sz\n";
        const auto& tr_trace = tr.observables.at("trace");
        const auto& sz = tr.observables.at("sz");
        for (std::size_t i = 0; i < times.size(); ++i)
            csv += format_double(times[i]) + "," + format_double(tr_trace[i]) + "," + format_double(sz[i]) + "\n";
        const std::string name = "simulate_" + order_tag(o.m, o.n) + ".csv";
        write_with_sidecar(cfg, name, csv,
                           {{"m", o.m},
                            {"n", o.n},
                            {"gamma_rate", bath.gamma_rate()},
                            {"tau", bath.correlation_time()},
                            {"memory_cutoff", ev.memory_cutoff()}});
        log << "simulate: wrote " << name << "\n";
    }
    return kExitOk;
}

int run_benchmark(const RunConfig& cfg, std::ostream& log) {
    struct Item {
        double gamma;
        int m, n;
    };
    std::vector<Item> items;
    for (double g : cfg.benchmark.gammas)
        for (const auto& o : cfg.effective_orders()) items.push_back({g, o.m, o.n});

    BenchmarkOptions opt;
    opt.samples = cfg.benchmark.samples;
    opt.quad = cfg.tolerances.quad();
    opt.ode = cfg.tolerances.ode();
    opt.pseudomode.ode = cfg.tolerances.ode();
    opt.pseudomode.cutoff_tolerance = cfg.tolerances.cutoff_tolerance;
    opt.exec = Execution::serial; // work items run in parallel instead

    std::vector<BenchmarkResult> results(items.size());
    std::vector<std::string> errors(items.size());
    const int count = static_cast<int>(items.size());
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < count; ++i) {
        try {
            results[i] = benchmark_error(items[i].gamma, cfg.benchmark.eta, cfg.benchmark.omega, items[i].m, items[i].n, opt);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (int i = 0; i < count; ++i)
        if (!errors[i].empty()) {
            log << "benchmark: gamma=" << format_double(items[i].gamma) << " order (" << items[i].m << "," << items[i].n
                << ") failed: " << errors[i] << "\n";
            return kExitFailure;
        }

    json points = json::array();
    bool all_below = true;
    for (const auto& r : results) {
        std::string csv = "t,sz_mqme,sz_exact,delta_sz\n";
        const auto& a = r.mqme.observables.at("sz");
        const auto& b = r.exact.trajectory.observables.at("sz");
        for (std::size_t i = 0; i < r.mqme.times.size(); ++i)
            csv += format_double(r.mqme.times[i]) + "," + format_double(a[i]) + "," + format_double(b[i]) + "," +
                   format_double(r.delta_sz[i]) + "\n";
        const std::string name = "benchmark_gamma" + format_double(r.gamma) + "_" + order_tag(r.m, r.n) + ".csv";
        const double gt = r.gamma_rate * r.tau;
        const double bound = tight_normalized(r.m, r.n, gt, cfg.tolerances.term_budget);
        const bool below = r.normalized <= bound;
        all_below = all_below && below;
        const json meta = {{"gamma", r.gamma},
                           {"eta", r.eta},
                           {"omega", r.omega},
                           {"m", r.m},
                           {"n", r.n},
                           {"gamma_rate", r.gamma_rate},
                           {"tau", r.tau},
                           {"gamma_tau", gt},
                           {"t_o", r.t_o},
                           {"fock_cutoff", r.exact.fock_cutoff},
                           {"fock_cutoff_change", r.exact.cutoff_change}};
        write_with_sidecar(cfg, name, csv, meta);
        json p = meta;
        p["file"] = name;
        p["delta_sz_at_t_o"] = r.delta_at_t_o;
        p["normalized"] = r.normalized;
        p["tight_bound"] = bound;
        p["below_bound"] = below;
        points.push_back(p);
        log << "benchmark: gamma=" << format_double(r.gamma) << " (" << r.m << "," << r.n
            << ") delta/(Gamma t_o)=" << format_double(r.normalized) << " bound=" << format_double(bound)
            << (below ? " below" : " ABOVE") << "\n";
    }
    const json summary = {{"points", points}, {"all_below_bound", all_below}};
    write_with_sidecar(cfg, "benchmark_summary.json", summary.dump(2) + "\n");
    return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& log) {
    acceptance::Options opt;
    opt.seed = cfg.seed;
    opt.exponential_constant = cfg.tolerances.exponential_constant;
    opt.threads = cfg.threads;
    const auto results = acceptance::run_with_determinism(opt);
    const std::string text = acceptance::report(results);
    log << text;
    write_with_sidecar(cfg, "verify_report.txt", text);
    return acceptance::all_pass(results) ? kExitOk : kExitFailure;
}

int run_mode(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.mode) {
    case Mode::bounds: return run_bounds(cfg, log);
    case Mode::simulate: return run_simulate(cfg, log);
    case Mode::benchmark: return run_benchmark(cfg, log);
    case Mode::verify: return run_verify(cfg, log);
    }
    return kExitUsage;
}

} // namespace mqme
