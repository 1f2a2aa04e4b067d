// acceptance.hpp — the end-to-end acceptance suite shared by `mqme verify` and the test target

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqme/bounds.hpp"

namespace mqme::acceptance {

struct Options {
    std::uint64_t seed = 20240611;                          // random moment sequences
    double exponential_constant = bounds::kExponentialConstant; // exposed for mutation checks
    int threads = 0;
};

struct Criterion {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // deterministic: no timings, fixed formatting
};

// Criteria 1-8, in order.
std::vector<Criterion> run(const Options& opt = {});

// Criteria 1-8 twice, plus criterion 9 (identical report text for both runs).
std::vector<Criterion> run_with_determinism(const Options& opt = {});

// One "PASS|FAIL <id> <name>: <detail>" line per criterion, LF-terminated.
std::string report(const std::vector<Criterion>& results);

bool all_pass(const std::vector<Criterion>& results);

// Individual criteria.
Criterion paper_point_77();
Criterion paper_point_88();
Criterion m_exp_at_benchmark();
Criterion theorem_consistency(double exponential_constant);
Criterion oracle_suite(std::uint64_t seed);

struct BenchmarkChecks {
    Criterion inequality; // criterion 5
    Criterion scaling;    // criterion 6
    Criterion dynamics;   // criterion 8
};
BenchmarkChecks benchmark_checks();

} // namespace mqme::acceptance
