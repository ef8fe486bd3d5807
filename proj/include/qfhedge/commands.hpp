#pragma once

#include <string>

#include "qfhedge/config.hpp"

namespace qfhedge {

/// Result of one CLI subcommand: the CSV payload, an exit status
/// (0 ok, 1 check failure, 2 config error) and any human-facing notes.
struct CommandOutput {
    std::string csv;
    int exit_code = 0;
    std::string notes;
};

/// Single-contract price, per-contract prices for each requested n, and the
/// limiting per-contract price, all at (lambda_p0, t = 0).
CommandOutput cmd_price(const RunConfig& cfg);

/// Price-versus-rho curves for every q in the sweep list, for both the
/// single-contract and limiting quantities.
CommandOutput cmd_sweep(const RunConfig& cfg);

/// Full check battery; exit code 1 when any check fails.
CommandOutput cmd_validate(const RunConfig& cfg);

/// Hedged-portfolio simulation report, one row per swept rho.
CommandOutput cmd_hedge_sim(const RunConfig& cfg);

}  // namespace qfhedge
