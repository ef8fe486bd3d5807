#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "qfhedge/grid.hpp"
#include "qfhedge/model.hpp"

namespace qfhedge {

/// Resolved run configuration. Defaults reproduce the baseline study
/// (T = 10, r = 0.04, a^P = 0.04, b^P = 0.1, floor 0.02, alpha = 0.1);
/// the reference population mirrors the insured one unless overridden.
struct RunConfig {
    MarketSpec market{0.04, 0.0, 0.1, 0.0, 10.0};
    PopulationPair pops{{0.04, 0.1, 0.02}, {0.04, 0.1, 0.02}, 0.06, 0.06};
    bool lambda_p0_given = false;

    double grid_m = 8.0;
    int grid_i = 640;
    int grid_j = 1000;

    std::size_t mc_paths = 200000;
    int mc_steps = 500;
    std::uint64_t seed = 20100930;

    std::vector<int> n_contracts{1};
    std::vector<double> sweep_rho;
    std::vector<double> sweep_q;

    int hedge_n_insured = 1;
    double hedge_delta = 0.002;
    int hedge_steps = 1;

    std::string out;

    Grid1D grid() const { return build_grid(grid_m, grid_i, grid_j, market.maturity); }
};

/// Parses `key = value` lines ('#' starts a comment; lists are
/// comma-separated). Unknown keys and malformed values raise ConfigError
/// naming the offending key.
RunConfig parse_config(std::istream& in);

RunConfig load_config(const std::string& path);

/// 12-significant-digit representation used in every CSV cell.
std::string format_number(double v);

}  // namespace qfhedge
