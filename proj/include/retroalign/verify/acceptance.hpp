#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace retroalign::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0;
    double budget_seconds = 0;
    std::string detail;
};

struct AcceptanceOptions {
    std::vector<int> criteria;  // empty runs all
    int seeds = 100;
    int generic_prime_systems = 10000;
    int generic_shared_instances = 1000;
    std::uint64_t base_seed = 1;
    bool inject_fault = false;
};

// Scope names: all, golden, consistency (alias appendices), asymptotics,
// ordering, selection, simulation, phases, genericity. Throws std::invalid_argument on others.
std::vector<int> scope_criteria(const std::string& scope);

CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

// "PASS [3] asymptotics (0.12 s / 1 s): detail"
std::string format_line(const CriterionResult& r);

} // namespace retroalign::verify
