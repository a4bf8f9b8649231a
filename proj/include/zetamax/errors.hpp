#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zetamax {

// Error taxonomy. The CLI maps these onto process exit codes:
//   config_error -> 2, budget/capacity/precision/resolution -> 3,
//   invalid_run_error -> 4.

struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration or series exceeded its configured budget. Message names the budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// A sieve/table does not cover the requested range. Message reports the required limit.
struct coverage_error : std::runtime_error {
    explicit coverage_error(const std::string& what) : std::runtime_error(what) {}
};

struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested accuracy unattainable within the term budget.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature/grid step too coarse for the requested kernel or identity.
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

// Phase-recurrence drift exceeded tolerance at a validation point.
struct resync_error : std::runtime_error {
    explicit resync_error(const std::string& what) : std::runtime_error(what) {}
};

// Configuration rejected; carries every violation found, not just the first.
struct config_error : std::runtime_error {
    std::vector<std::string> issues;
    explicit config_error(std::vector<std::string> iss)
        : std::runtime_error(join(iss)), issues(std::move(iss)) {}
    static std::string join(const std::vector<std::string>& iss) {
        std::string s = "invalid configuration:";
        for (const auto& i : iss) { s += "\n  - "; s += i; }
        return s;
    }
};

// A run finished but exceeded the tolerated per-sample failure rate.
struct invalid_run_error : std::runtime_error {
    explicit invalid_run_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace zetamax
