#pragma once

#include <string>
#include <vector>

#include "qfhedge/config.hpp"

namespace qfhedge {

struct CheckResult {
    std::string name;
    double expected;
    double observed;
    double tolerance;
    bool pass;
};

/// Solver-vs-oracle equivalence: for five (rho, q) pairs spanning
/// rho in {-0.5, 0, 0.5, 0.8, 1} and q in {-0.05, 0, 0.05, 0.15}, the
/// alpha = 0 price factor and beta must match their Monte Carlo estimators
/// within 3 standard errors. Solves run on a refinement of the config grid
/// so discretization bias stays below the Monte Carlo noise floor.
std::vector<CheckResult> check_pde_mc_equivalence(const RunConfig& cfg);

/// Nodewise comparison-principle checks for the solved surfaces, run for
/// n up to 5 on a 3x3 (rho, q) grid around the configured market.
std::vector<CheckResult> check_property_suite(const RunConfig& cfg);

/// psi^(n)/n - beta within 1/n + 2J/sqrt(n) + 0.01 at every node for
/// n in {1, 2, 5, 10, 25}.
std::vector<CheckResult> check_limit_gap(const RunConfig& cfg);

/// First-order grid convergence: price differences between successive grid
/// refinements shrink with a ratio inside [0.3, 0.7].
std::vector<CheckResult> check_grid_convergence(const RunConfig& cfg);

/// Everything cmd_validate runs, in a fixed order.
std::vector<CheckResult> run_validation_battery(const RunConfig& cfg);

std::string checks_to_csv(const std::vector<CheckResult>& results);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace qfhedge
