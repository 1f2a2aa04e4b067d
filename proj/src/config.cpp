// config.cpp — run-configuration parsing, defaults and validation

#include "mqme/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mqme/errors.hpp"

namespace mqme {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError(where + ": missing number '" + key + "'");
    return j.at(key).get<double>();
}

bounds::Order parse_order(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "m_exp") throw ConfigError("orders: unknown symbolic order '" + j.get<std::string>() + "'");
        return bounds::Order::exp_order();
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const int m = j[0].get<int>(), n = j[1].get<int>();
        if (m < 0 || n < 0) throw ConfigError("orders: m and n must be >= 0");
        return bounds::Order::fixed(m, n);
    }
    throw ConfigError("orders: each entry must be [m, n] or \"m_exp\"");
}

json order_json(const bounds::Order& o) {
    if (o.use_m_exp) return "m_exp";
    return json::array({o.m, o.n});
}

} // namespace

Mode parse_mode(const std::string& s) {
    if (s == "bounds") return Mode::bounds;
    if (s == "simulate") return Mode::simulate;
    if (s == "benchmark") return Mode::benchmark;
    if (s == "verify") return Mode::verify;
    throw ConfigError("unknown mode '" + s + "'");
}

std::string mode_name(Mode m) {
    switch (m) {
    case Mode::bounds: return "bounds";
    case Mode::simulate: return "simulate";
    case Mode::benchmark: return "benchmark";
    case Mode::verify: return "verify";
    }
    return "bounds";
}

void GridSpec::validate() const {
    if (spacing != "log" && spacing != "linear") throw ConfigError("grid.spacing must be \"log\" or \"linear\"");
    if (count < 1) throw ConfigError("grid.count must be >= 1");
    if (!(start > 0.0) || !(stop > 0.0) || !std::isfinite(start) || !std::isfinite(stop))
        throw ConfigError("grid.start and grid.stop must be finite and > 0");
    if (count > 1 && !(stop > start)) throw ConfigError("grid.stop must exceed grid.start when count > 1");
}

std::vector<double> GridSpec::values() const {
    validate();
    if (count == 1) return {start};
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        v[i] = spacing == "log" ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                                : start + f * (stop - start);
    }
    v.front() = start;
    v.back() = stop;
    return v;
}

BathModel BathSpec::build() const {
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (entries.empty() || d * d != entries.size())
        throw ConfigError("bath.channels must hold d*d entries (row-major channel matrix)");
    BathModel::Channels ch(d, std::vector<std::vector<ExpMode>>(d));
    for (std::size_t i = 0; i < entries.size(); ++i) ch[i / d][i % d] = entries[i];
    try {
        return BathModel(std::move(ch), gamma, rate_normalization);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("bath: ") + e.what());
    }
}

void Tolerances::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw ConfigError("tolerances.rel_tol must lie in (0, 1e-2]");
    if (!(ode_rtol > 0.0 && ode_rtol <= 1e-2)) throw ConfigError("tolerances.ode_rtol must lie in (0, 1e-2]");
    if (!(ode_atol > 0.0 && ode_atol <= 1e-2)) throw ConfigError("tolerances.ode_atol must lie in (0, 1e-2]");
    if (!(cutoff_tolerance > 0.0 && cutoff_tolerance <= 1e-2))
        throw ConfigError("tolerances.cutoff_tolerance must lie in (0, 1e-2]");
    if (!(term_budget >= 1.0)) throw ConfigError("tolerances.term_budget must be >= 1");
    if (!std::isfinite(exponential_constant)) throw ConfigError("tolerances.exponential_constant must be finite");
}

QuadConfig Tolerances::quad() const {
    QuadConfig q;
    q.rel_tol = rel_tol;
    return q;
}

ode::Options Tolerances::ode() const {
    ode::Options o;
    o.rtol = ode_rtol;
    o.atol = ode_atol;
    return o;
}

std::vector<bounds::Order> RunConfig::effective_orders() const {
    if (orders) return *orders;
    if (mode == Mode::bounds) return {bounds::Order::fixed(1, 1), bounds::Order::fixed(2, 2), bounds::Order::exp_order()};
    return {bounds::Order::fixed(1, 1), bounds::Order::fixed(2, 2)};
}

void RunConfig::validate() const {
    grid.validate();
    tolerances.validate();
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (output.empty()) throw ConfigError("output must be a non-empty path");
    if (benchmark.gammas.empty()) throw ConfigError("benchmark.gammas must not be empty");
    for (double g : benchmark.gammas)
        if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("benchmark.gammas must be finite and >= 0");
    if (!(benchmark.omega > 0.0) || !(benchmark.eta > 0.0)) throw ConfigError("benchmark.omega and eta must be > 0");
    if (benchmark.samples < 2) throw ConfigError("benchmark.samples must be >= 2");
    if (!(simulate.t_end > 0.0) || simulate.samples < 2) throw ConfigError("simulate needs t_end > 0 and samples >= 2");
    if (mode == Mode::simulate || mode == Mode::benchmark) {
        for (const auto& o : effective_orders())
            if (o.use_m_exp || o.m < 1 || o.m > 2 || o.n < 1 || o.n > 2)
                throw ConfigError("simulate and benchmark support orders with m, n in {1, 2}");
    }
    if (bath) bath->build();
}

RunConfig RunConfig::from_json(const json& j) {
    check_keys(j, "config", {"mode", "bath", "benchmark", "simulate", "orders", "grid", "tolerances", "output", "seed",
                             "threads"});
    RunConfig c;
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) throw ConfigError("mode must be a string");
        c.mode = parse_mode(j["mode"].get<std::string>());
    }
    if (j.contains("bath")) {
        const json& b = j["bath"];
        check_keys(b, "bath", {"gamma", "rate_normalization", "channels"});
        BathSpec s;
        s.gamma = number(b, "gamma", "bath");
        read(b, "rate_normalization", s.rate_normalization, "bath");
        if (!b.contains("channels") || !b["channels"].is_array()) throw ConfigError("bath.channels must be a list");
        for (const json& entry : b["channels"]) {
            if (!entry.is_array()) throw ConfigError("bath.channels: each entry must be a list of modes");
            std::vector<ExpMode> modes;
            for (const json& mo : entry) {
                check_keys(mo, "bath mode", {"amplitude_re", "amplitude_im", "decay_re", "decay_im"});
                modes.push_back({{number(mo, "amplitude_re", "bath mode"), number(mo, "amplitude_im", "bath mode")},
                                 {number(mo, "decay_re", "bath mode"), number(mo, "decay_im", "bath mode")}});
            }
            s.entries.push_back(std::move(modes));
        }
        c.bath = std::move(s);
    }
    if (j.contains("benchmark")) {
        const json& b = j["benchmark"];
        check_keys(b, "benchmark", {"gammas", "omega", "eta", "samples"});
        read(b, "gammas", c.benchmark.gammas, "benchmark");
        read(b, "omega", c.benchmark.omega, "benchmark");
        read(b, "eta", c.benchmark.eta, "benchmark");
        read(b, "samples", c.benchmark.samples, "benchmark");
    }
    if (j.contains("simulate")) {
        const json& s = j["simulate"];
        check_keys(s, "simulate", {"t_end", "samples"});
        read(s, "t_end", c.simulate.t_end, "simulate");
        read(s, "samples", c.simulate.samples, "simulate");
    }
    if (j.contains("orders")) {
        if (!j["orders"].is_array()) throw ConfigError("orders must be a list");
        std::vector<bounds::Order> os;
        for (const json& o : j["orders"]) os.push_back(parse_order(o));
        c.orders = std::move(os);
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, "grid", {"spacing", "start", "stop", "count"});
        read(g, "spacing", c.grid.spacing, "grid");
        read(g, "start", c.grid.start, "grid");
        read(g, "stop", c.grid.stop, "grid");
        read(g, "count", c.grid.count, "grid");
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        check_keys(t, "tolerances", {"rel_tol", "ode_rtol", "ode_atol", "cutoff_tolerance", "term_budget",
                                     "exponential_constant"});
        read(t, "rel_tol", c.tolerances.rel_tol, "tolerances");
        read(t, "ode_rtol", c.tolerances.ode_rtol, "tolerances");
        read(t, "ode_atol", c.tolerances.ode_atol, "tolerances");
        read(t, "cutoff_tolerance", c.tolerances.cutoff_tolerance, "tolerances");
        read(t, "term_budget", c.tolerances.term_budget, "tolerances");
        read(t, "exponential_constant", c.tolerances.exponential_constant, "tolerances");
    }
    read(j, "output", c.output, "config");
    read(j, "seed", c.seed, "config");
    read(j, "threads", c.threads, "config");
    c.validate();
    return c;
}

json RunConfig::to_json() const {
    json j;
    j["mode"] = mode_name(mode);
    if (bath) {
        json ch = json::array();
        for (const auto& entry : bath->entries) {
            json modes = json::array();
            for (const auto& m : entry)
                modes.push_back({{"amplitude_re", m.amplitude.real()},
                                 {"amplitude_im", m.amplitude.imag()},
                                 {"decay_re", m.decay.real()},
                                 {"decay_im", m.decay.imag()}});
            ch.push_back(modes);
        }
        j["bath"] = {{"gamma", bath->gamma}, {"rate_normalization", bath->rate_normalization}, {"channels", ch}};
    }
    j["benchmark"] = {{"gammas", benchmark.gammas},
                      {"omega", benchmark.omega},
                      {"eta", benchmark.eta},
                      {"samples", benchmark.samples}};
    j["simulate"] = {{"t_end", simulate.t_end}, {"samples", simulate.samples}};
    json os = json::array();
    for (const auto& o : effective_orders()) os.push_back(order_json(o));
    j["orders"] = os;
    j["grid"] = {{"spacing", grid.spacing}, {"start", grid.start}, {"stop", grid.stop}, {"count", grid.count}};
    j["tolerances"] = {{"rel_tol", tolerances.rel_tol},
                       {"ode_rtol", tolerances.ode_rtol},
                       {"ode_atol", tolerances.ode_atol},
                       {"cutoff_tolerance", tolerances.cutoff_tolerance},
                       {"term_budget", tolerances.term_budget},
                       {"exponential_constant", tolerances.exponential_constant}};
    j["output"] = output;
    j["seed"] = seed;
    j["threads"] = threads;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return RunConfig::from_json(j);
}

} // namespace mqme
