// commands.hpp — the bounds / simulate / benchmark / verify subcommands

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mqme/config.hpp"

namespace mqme {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

std::string tool_version();

// Writes `text` to out/name and a sidecar out/name.meta.json holding the full config,
// the tool version, the tolerances and `extra`.
void write_with_sidecar(const RunConfig& cfg, const std::string& name, const std::string& text,
                        const nlohmann::json& extra = nlohmann::json::object());

// Each returns an exit code; progress and diagnostics go to `log`.
int run_bounds(const RunConfig& cfg, std::ostream& log);
int run_simulate(const RunConfig& cfg, std::ostream& log);
int run_benchmark(const RunConfig& cfg, std::ostream& log);
// Prints the acceptance report to `log` and writes it to out/verify_report.txt.
int run_verify(const RunConfig& cfg, std::ostream& log);

int run_mode(const RunConfig& cfg, std::ostream& log);

} // namespace mqme
