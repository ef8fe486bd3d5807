#include "qfhedge/commands.hpp"

#include <algorithm>
#include <sstream>

#include "qfhedge/checks.hpp"
#include "qfhedge/hedge.hpp"
#include "qfhedge/parallel.hpp"
#include "qfhedge/pde.hpp"

namespace qfhedge {

namespace {

constexpr const char* price_header = "quantity,n,rho,q_mort,alpha,lambda_p0,value\n";

std::string price_row(const char* quantity, int n, const MarketSpec& market, double lambda0,
                      double value) {
    std::ostringstream row;
    row << quantity << ',' << n << ',' << format_number(market.rho) << ','
        << format_number(market.q_mort) << ',' << format_number(market.alpha) << ','
        << format_number(lambda0) << ',' << format_number(value) << '\n';
    return row.str();
}

std::string default_lambda_note(const RunConfig& cfg) {
    if (cfg.lambda_p0_given) return "";
    return "note: lambda_p0 not set; using the default 0.06 (no standard value exists "
           "for this initial hazard -- calibrate or set it explicitly)\n";
}

}  // namespace

CommandOutput cmd_price(const RunConfig& cfg) {
    validate(cfg.market, cfg.pops);
    const Grid1D grid = cfg.grid();
    const double lambda0 = cfg.pops.initial_insured;
    const double discount = std::exp(-cfg.market.r * cfg.market.maturity);

    const int deepest = *std::max_element(cfg.n_contracts.begin(), cfg.n_contracts.end());
    const std::vector<PriceSurface> stack = solve_psi_n(cfg.pops, cfg.market, grid, deepest);
    const PriceSurface beta = solve_beta(cfg.pops, cfg.market, grid);

    std::ostringstream csv;
    csv << price_header;
    csv << price_row("single", 1, cfg.market, lambda0,
                     discount * stack[0].value(lambda0, 0.0));
    for (const int n : cfg.n_contracts) {
        csv << price_row("per_contract", n, cfg.market, lambda0,
                         discount * stack[n - 1].value(lambda0, 0.0) / n);
    }
    // n = 0 denotes the n -> infinity limit.
    csv << price_row("limiting", 0, cfg.market, lambda0,
                     discount * beta.value(lambda0, 0.0));
    return {csv.str(), 0, default_lambda_note(cfg)};
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
    validate(cfg.market, cfg.pops);
    if (cfg.sweep_rho.empty()) {
        throw ConfigError("config key 'sweep_rho': required by the sweep command");
    }
    if (cfg.sweep_q.empty()) {
        throw ConfigError("config key 'sweep_q': required by the sweep command");
    }

    std::vector<double> rhos = cfg.sweep_rho;
    std::vector<double> qs = cfg.sweep_q;
    std::sort(rhos.begin(), rhos.end());
    std::sort(qs.begin(), qs.end());

    const Grid1D grid = cfg.grid();
    const double lambda0 = cfg.pops.initial_insured;
    const double discount = std::exp(-cfg.market.r * cfg.market.maturity);

    struct Point {
        double single;
        double limiting;
    };
    std::vector<Point> points(rhos.size() * qs.size());

    // Sweep points are independent solves; chunks write disjoint slots.
    parallel_chunks(points.size(), [&](std::size_t first, std::size_t last) {
        for (std::size_t idx = first; idx < last; ++idx) {
            MarketSpec market = cfg.market;
            market.q_mort = qs[idx / rhos.size()];
            market.rho = rhos[idx % rhos.size()];
            validate(market, cfg.pops);
            const PriceSurface psi = solve_psi_single(cfg.pops, market, grid);
            const PriceSurface beta = solve_beta(cfg.pops, market, grid);
            points[idx] = {discount * psi.value(lambda0, 0.0),
                           discount * beta.value(lambda0, 0.0)};
        }
    });

    std::ostringstream csv;
    csv << price_header;
    const auto emit_quantity = [&](const char* quantity, const int n, const auto& member) {
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
                MarketSpec market = cfg.market;
                market.q_mort = qs[qi];
                market.rho = rhos[ri];
                csv << price_row(quantity, n, market, lambda0,
                                 member(points[qi * rhos.size() + ri]));
            }
        }
    };
    emit_quantity("single", 1, [](const Point& p) { return p.single; });
    emit_quantity("limiting", 0, [](const Point& p) { return p.limiting; });
    return {csv.str(), 0, default_lambda_note(cfg)};
}

CommandOutput cmd_validate(const RunConfig& cfg) {
    validate(cfg.market, cfg.pops);
    const std::vector<CheckResult> results = run_validation_battery(cfg);
    return {checks_to_csv(results), all_pass(results) ? 0 : 1, ""};
}

CommandOutput cmd_hedge_sim(const RunConfig& cfg) {
    validate(cfg.market, cfg.pops);
    std::vector<double> rhos = cfg.sweep_rho.empty() ? std::vector<double>{cfg.market.rho}
                                                     : cfg.sweep_rho;
    std::sort(rhos.begin(), rhos.end());

    const Grid1D grid = cfg.grid();
    std::ostringstream csv;
    csv << "rho,n_insured,empirical_drift,theory_drift,empirical_var,theory_var,"
           "empirical_sharpe,alpha\n";
    for (const double rho : rhos) {
        MarketSpec market = cfg.market;
        market.rho = rho;
        validate(market, cfg.pops);
        const HedgeSurfaces surfaces =
            make_hedge_surfaces(cfg.pops, market, grid, cfg.hedge_n_insured);
        HedgeSimConfig sim;
        sim.n_insured = cfg.hedge_n_insured;
        sim.n_paths = cfg.mc_paths;
        sim.n_steps = cfg.hedge_steps;
        sim.delta = cfg.hedge_delta;
        sim.seed = cfg.seed;
        const HedgeReport report = simulate_hedged_portfolio(cfg.pops, market, surfaces, sim);
        csv << format_number(rho) << ',' << report.n_insured << ','
            << format_number(report.empirical_drift) << ','
            << format_number(report.theory_drift) << ','
            << format_number(report.empirical_var) << ','
            << format_number(report.theory_var) << ','
            << format_number(report.empirical_sharpe) << ','
            << format_number(market.alpha) << '\n';
    }
    return {csv.str(), 0, ""};
}

}  // namespace qfhedge
