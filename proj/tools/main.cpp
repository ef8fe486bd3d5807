#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfhedge/commands.hpp"
#include "qfhedge/errors.hpp"

namespace {

struct CliFlags {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double grid_m = 0.0;
    bool grid_m_given = false;
    int grid_i = 0;
    bool grid_i_given = false;
    int grid_j = 0;
    bool grid_j_given = false;
};

void add_common(CLI::App* cmd, CliFlags& flags) {
    cmd->add_option("--config", flags.config_path, "path to a key = value config file");
    cmd->add_option("--out", flags.out, "output CSV path (default: stdout)");
    cmd->add_option("--seed", flags.seed, "Monte Carlo seed override")
        ->each([&](const std::string&) { flags.seed_given = true; });
    cmd->add_option("--grid-m", flags.grid_m, "log-space half-width override")
        ->each([&](const std::string&) { flags.grid_m_given = true; });
    cmd->add_option("--grid-i", flags.grid_i, "spatial interval count override")
        ->each([&](const std::string&) { flags.grid_i_given = true; });
    cmd->add_option("--grid-j", flags.grid_j, "time step count override")
        ->each([&](const std::string&) { flags.grid_j_given = true; });
}

qfhedge::RunConfig resolve_config(const CliFlags& flags) {
    qfhedge::RunConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = qfhedge::load_config(flags.config_path);
    }
    if (flags.seed_given) cfg.seed = flags.seed;
    if (flags.grid_m_given) cfg.grid_m = flags.grid_m;
    if (flags.grid_i_given) cfg.grid_i = flags.grid_i;
    if (flags.grid_j_given) cfg.grid_j = flags.grid_j;
    if (!flags.out.empty()) cfg.out = flags.out;
    cfg.grid();  // surface dimension errors before any computation
    return cfg;
}

int emit(const qfhedge::CommandOutput& result, const qfhedge::RunConfig& cfg) {
    if (!result.notes.empty()) {
        std::cerr << result.notes;
    }
    if (cfg.out.empty()) {
        std::cout << result.csv;
    } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write output file '" << cfg.out << "'\n";
            return 2;
        }
        out << result.csv;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pure endowment pricing and q-forward hedging toolkit"};
    app.require_subcommand(1);

    CliFlags flags;
    CLI::App* price = app.add_subcommand("price", "price factors at (lambda_p0, t = 0)");
    CLI::App* sweep = app.add_subcommand("sweep", "price curves over rho for each q");
    CLI::App* validate = app.add_subcommand("validate", "solver-vs-oracle check battery");
    CLI::App* hedge = app.add_subcommand("hedge-sim", "hedged-portfolio moment report");
    for (CLI::App* cmd : {price, sweep, validate, hedge}) {
        add_common(cmd, flags);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const qfhedge::RunConfig cfg = resolve_config(flags);
        qfhedge::CommandOutput result;
        if (price->parsed()) {
            result = qfhedge::cmd_price(cfg);
        } else if (sweep->parsed()) {
            result = qfhedge::cmd_sweep(cfg);
        } else if (validate->parsed()) {
            result = qfhedge::cmd_validate(cfg);
        } else {
            result = qfhedge::cmd_hedge_sim(cfg);
        }
        return emit(result, cfg);
    } catch (const qfhedge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qfhedge::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
