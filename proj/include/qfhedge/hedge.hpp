#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qfhedge/grid.hpp"
#include "qfhedge/mc.hpp"
#include "qfhedge/model.hpp"
#include "qfhedge/pde.hpp"

namespace qfhedge {

/// Self-financing sub-portfolio positions. With a constant short rate the
/// T-bond is deterministic and carries no hedgeable risk, so bond_units is
/// identically zero and the residual sits in the money market.
struct HedgePosition {
    double qforward_units;  // pi^{lambda^I}
    double bond_units;      // pi^r, always 0 here
    double money_market;    // V - pi^r F - pi^{lambda^I} S
};

struct PortfolioState {
    double time;
    double value;  // portfolio value Pi_t
    int alive_count;
    double lambda_p;
    double lambda_i;
    double big_lambda_i;  // cumulative reference hazard Lambda^I_t
};

/// q-forward mark and its lambda^I sensitivity.
struct QforwardQuote {
    double value;
    double d_lambda_i;
};

/// S = e^{-r(T-t)} (e^{-Lambda^I} phi^I(lambda^I, t) - K), from iterated
/// expectations on the defining payoff e^{-Lambda^I_T} - K.
QforwardQuote qforward_value(const MarketSpec& spec, const PriceSurface& survival,
                             double lambda_i, double big_lambda_i, double t, double strike);

/// Variance-minimizing q-forward position for a per-contract price surface:
///   pi = rho * b^P (lambda^P - floor^P) P_lambda / (b^I (lambda^I - floor^I) S_lambda),
/// with P_lambda = alive_count * (discounted per-contract surface derivative).
/// Zero correlation short-circuits to a zero position.
HedgePosition optimal_hedge(const PopulationPair& pops, const MarketSpec& spec,
                            const PriceSurface& psi_surface, const PriceSurface& survival,
                            const PortfolioState& state, double strike);

/// Position from explicit sensitivities; the building block of the above.
double optimal_qforward_units(const PopulationPair& pops, const MarketSpec& spec,
                              double lambda_p, double lambda_i, double p_lambda,
                              double s_lambda);

/// Surfaces the simulator marks against. Portfolios of up to stack_limit lives
/// carry the full psi^(1..n) stack; larger ones use per-contract beta marking.
struct HedgeSurfaces {
    static constexpr int stack_limit = 10;

    std::vector<PriceSurface> psi_stack;  // psi^(1..n); empty under beta marking
    std::optional<PriceSurface> beta;
    PriceSurface survival;  // phi^I on the reference population
    double strike;          // K = phi^I(lambda_i0, 0): par at inception
    bool beta_marking;
};

HedgeSurfaces make_hedge_surfaces(const PopulationPair& pops, const MarketSpec& spec,
                                  const Grid1D& grid, int n_insured);

struct HedgeSimConfig {
    int n_insured = 1;
    std::size_t n_paths = 10000;
    int n_steps = 1;      // rebalancing steps actually simulated
    double delta = 0.01;  // step length; n_steps * delta <= maturity
    std::uint64_t seed = 1;
    bool force_unhedged = false;  // pin pi to 0 for variance comparisons
};

/// Empirical local moments of the hedged portfolio plus bookkeeping
/// diagnostics. Drift/variance rates are measured over the first step,
/// conditional on time 0.
struct HedgeReport {
    int n_insured;
    std::size_t n_paths;
    int n_steps;
    double delta;
    bool beta_marking;

    double price0;  // total obligation value at inception
    double pi0;     // initial portfolio value (0: premium fully invested)

    double empirical_drift;  // E[dPi]/dt over the first step
    double drift_se;
    double empirical_var;  // Var[dPi]/dt over the first step
    double var_se;
    double empirical_sharpe;  // (drift - r pi0) / sqrt(var rate)
    double sharpe_se;

    double theory_var;    // minimized local variance at time 0
    double theory_drift;  // r pi0 + alpha sqrt(theory_var)
    double per_contract_var;    // Var[dPi/n]/dt
    double death_var_limit;     // lambda_p0 (P/n)^2 / n: the rho = +-1 floor

    double mean_death_fraction;  // deaths over the horizon / n
    double survival_fraction;    // mean alive at horizon / n
    double max_self_financing_residual;  // relative, across all paths/steps
    double mean_terminal_pnl;            // mean Pi at the simulated horizon
};

/// Simulates the rebalanced portfolio: exact hazard steps under the physical
/// measure, Bernoulli death thinning given the common hazard path, marks from
/// the solved surfaces, money market accrual at r.
HedgeReport simulate_hedged_portfolio(const PopulationPair& pops, const MarketSpec& spec,
                                      const HedgeSurfaces& surfaces,
                                      const HedgeSimConfig& config);

}  // namespace qfhedge
