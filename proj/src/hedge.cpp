#include "qfhedge/hedge.hpp"

#include <algorithm>
#include <cmath>

#include "qfhedge/errors.hpp"
#include "qfhedge/parallel.hpp"

namespace qfhedge {

QforwardQuote qforward_value(const MarketSpec& spec, const PriceSurface& survival,
                             double lambda_i, double big_lambda_i, double t, double strike) {
    const SurfacePoint phi = survival.lookup(lambda_i, t);
    const double discount = std::exp(-spec.r * (spec.maturity - t));
    const double index = std::exp(-big_lambda_i);
    return {discount * (index * phi.value - strike), discount * index * phi.d_lambda};
}

double optimal_qforward_units(const PopulationPair& pops, const MarketSpec& spec,
                              double lambda_p, double lambda_i, double p_lambda,
                              double s_lambda) {
    if (spec.rho == 0.0) {
        return 0.0;  // the q-forward hedges nothing without correlation
    }
    if (std::abs(s_lambda) < 1e-12) {
        throw DegenerateSensitivity("q-forward lambda^I sensitivity below 1e-12");
    }
    const double excess_p = pops.insured.b * (lambda_p - pops.insured.lambda_floor);
    const double excess_i = pops.reference.b * (lambda_i - pops.reference.lambda_floor);
    return spec.rho * excess_p * p_lambda / (excess_i * s_lambda);
}

HedgePosition optimal_hedge(const PopulationPair& pops, const MarketSpec& spec,
                            const PriceSurface& psi_surface, const PriceSurface& survival,
                            const PortfolioState& state, double strike) {
    const double discount = std::exp(-spec.r * (spec.maturity - state.time));
    const SurfacePoint per_contract = psi_surface.lookup(state.lambda_p, state.time);
    const double p_lambda = state.alive_count * discount * per_contract.d_lambda;

    const QforwardQuote quote = qforward_value(spec, survival, state.lambda_i,
                                               state.big_lambda_i, state.time, strike);
    const double units = optimal_qforward_units(pops, spec, state.lambda_p, state.lambda_i,
                                                p_lambda, quote.d_lambda_i);
    return {units, 0.0, state.value - units * quote.value};
}

HedgeSurfaces make_hedge_surfaces(const PopulationPair& pops, const MarketSpec& spec,
                                  const Grid1D& grid, int n_insured) {
    validate(spec, pops);
    if (n_insured < 1) {
        throw ConfigError("n_insured must be >= 1");
    }

    const bool beta_marking = n_insured > HedgeSurfaces::stack_limit;
    std::vector<PriceSurface> stack;
    std::optional<PriceSurface> beta;
    if (beta_marking) {
        beta = solve_beta(pops, spec, grid);
    } else {
        stack = solve_psi_n(pops, spec, grid, n_insured);
    }
    PriceSurface survival = solve_survival_factor(pops.reference, spec, grid);
    const double strike = survival.value(pops.initial_reference, 0.0);
    return {std::move(stack), std::move(beta), std::move(survival), strike, beta_marking};
}

namespace {

// Total obligation value and its lambda^P sensitivity at (lambda_p, t) for
// `alive` surviving insureds.
struct ObligationMark {
    double value;
    double d_lambda;
};

ObligationMark mark_obligation(const HedgeSurfaces& surfaces, const MarketSpec& spec,
                               int alive, double lambda_p, double t) {
    if (alive == 0) {
        return {0.0, 0.0};
    }
    const double discount = std::exp(-spec.r * (spec.maturity - t));
    if (surfaces.beta_marking) {
        const SurfacePoint unit = surfaces.beta->lookup(lambda_p, t);
        return {alive * discount * unit.value, alive * discount * unit.d_lambda};
    }
    const SurfacePoint level = surfaces.psi_stack[alive - 1].lookup(lambda_p, t);
    return {discount * level.value, discount * level.d_lambda};
}

// Inverse-CDF binomial draw: walks the pmf from k = 0, so the expected cost
// is O(n p). Consumes exactly one uniform.
int binomial_draw(CounterRng& rng, int n, double p) {
    if (n == 0 || p <= 0.0) {
        rng.next_uniform();
        return 0;
    }
    if (p >= 1.0) {
        rng.next_uniform();
        return n;
    }
    const double u = rng.next_uniform();
    double pmf = std::exp(n * std::log1p(-p));
    double cdf = pmf;
    int k = 0;
    const double odds = p / (1.0 - p);
    while (u > cdf && k < n) {
        pmf *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
        cdf += pmf;
        ++k;
    }
    return k;
}

}  // namespace

HedgeReport simulate_hedged_portfolio(const PopulationPair& pops, const MarketSpec& spec,
                                      const HedgeSurfaces& surfaces,
                                      const HedgeSimConfig& config) {
    validate(spec, pops);
    const int n = config.n_insured;
    if (n < 1 || config.n_paths < 1 || config.n_steps < 1 || !(config.delta > 0.0)) {
        throw ConfigError("hedge simulation requires n_insured, n_paths, n_steps >= 1, delta > 0");
    }
    if (config.n_steps * config.delta > spec.maturity * (1.0 + 1e-12)) {
        throw ConfigError("hedge simulation horizon exceeds maturity");
    }
    if (!surfaces.beta_marking &&
        static_cast<int>(surfaces.psi_stack.size()) < n) {
        throw ConfigError("psi stack shallower than n_insured");
    }

    const double delta = config.delta;
    const double accrual = std::exp(spec.r * delta);
    const TwoFactorStepper stepper(pops, spec, MeasureTag::Physical, delta);
    const double floor_p = pops.insured.lambda_floor;
    const double floor_i = pops.reference.lambda_floor;

    const std::size_t n_paths = config.n_paths;
    std::vector<double> first_dpi(n_paths);
    std::vector<double> deaths_total(n_paths);
    std::vector<double> alive_end(n_paths);
    std::vector<double> terminal_pnl(n_paths);
    std::vector<double> fin_residual(n_paths);

    parallel_chunks(n_paths, [&](std::size_t first, std::size_t last) {
        for (std::size_t path = first; path < last; ++path) {
            CounterRng rng(config.seed, path);
            double xp = pops.initial_insured - floor_p;
            double xi = pops.initial_reference - floor_i;
            double big_lambda_i = 0.0;
            int alive = n;
            int deaths = 0;
            double max_resid = 0.0;

            double value = mark_obligation(surfaces, spec, alive, xp + floor_p, 0.0).value;
            double pi = 0.0;  // premium exactly funds the sub-portfolio

            for (int s = 0; s < config.n_steps; ++s) {
                const double t = s * delta;
                const double t_next = (s + 1) * delta;
                const double lambda_p_old = xp + floor_p;
                const double lambda_i_old = xi + floor_i;

                const QforwardQuote s_old = qforward_value(spec, surfaces.survival,
                                                           lambda_i_old, big_lambda_i, t,
                                                           surfaces.strike);
                double units = 0.0;
                if (!config.force_unhedged && alive > 0) {
                    const ObligationMark obligation =
                        mark_obligation(surfaces, spec, alive, lambda_p_old, t);
                    units = optimal_qforward_units(pops, spec, lambda_p_old, lambda_i_old,
                                                   obligation.d_lambda, s_old.d_lambda_i);
                }
                const double money_market = value - units * s_old.value;

                stepper.advance(rng, xp, xi);
                const double lambda_i_new = xi + floor_i;
                big_lambda_i += 0.5 * delta * (lambda_i_old + lambda_i_new);

                const int died = binomial_draw(rng, alive, -std::expm1(-lambda_p_old * delta));
                alive -= died;
                deaths += died;

                const QforwardQuote s_new = qforward_value(spec, surfaces.survival,
                                                           lambda_i_new, big_lambda_i, t_next,
                                                           surfaces.strike);
                const double value_next = units * s_new.value + money_market * accrual;
                // Independent accounting route: position-weighted changes plus accrual.
                const double value_alt = value + units * (s_new.value - s_old.value) +
                                         money_market * (accrual - 1.0);
                max_resid = std::max(max_resid, std::abs(value_next - value_alt) /
                                                    std::max(1.0, std::abs(value_next)));

                const double obligation_next =
                    mark_obligation(surfaces, spec, alive, xp + floor_p, t_next).value;
                const double pi_next = -obligation_next + value_next;
                if (s == 0) {
                    first_dpi[path] = pi_next - pi;
                }
                pi = pi_next;
                value = value_next;
            }

            deaths_total[path] = deaths;
            alive_end[path] = alive;
            terminal_pnl[path] = pi;
            fin_residual[path] = max_resid;
        }
    });

    HedgeReport report{};
    report.n_insured = n;
    report.n_paths = n_paths;
    report.n_steps = config.n_steps;
    report.delta = delta;
    report.beta_marking = surfaces.beta_marking;

    report.price0 = mark_obligation(surfaces, spec, n, pops.initial_insured, 0.0).value;
    report.pi0 = 0.0;

    const McEstimate dpi = reduce_sample(first_dpi);
    const double n_d = static_cast<double>(n_paths);
    const double var_dpi = dpi.std_error * dpi.std_error * n_d;
    double fourth = 0.0;
    for (double v : first_dpi) {
        const double d = v - dpi.mean;
        fourth += d * d * d * d;
    }
    fourth /= n_d;

    report.empirical_drift = dpi.mean / delta;
    report.drift_se = dpi.std_error / delta;
    report.empirical_var = var_dpi / delta;
    report.var_se = std::sqrt(std::max(0.0, fourth - var_dpi * var_dpi) / n_d) / delta;
    const double sd_rate = std::sqrt(report.empirical_var);
    report.empirical_sharpe =
        sd_rate > 0.0 ? (report.empirical_drift - spec.r * report.pi0) / sd_rate : 0.0;
    report.sharpe_se = 1.0 / std::sqrt(n_d * delta);

    // Minimized local variance at time 0 from the marking surfaces.
    {
        const double lambda0 = pops.initial_insured;
        const ObligationMark m_n = mark_obligation(surfaces, spec, n, lambda0, 0.0);
        const ObligationMark m_prev = mark_obligation(surfaces, spec, n - 1, lambda0, 0.0);
        const double jump = surfaces.beta_marking ? m_n.value / n : m_n.value - m_prev.value;
        const double diffusive =
            pops.insured.b * (lambda0 - floor_p) * m_n.d_lambda;
        report.theory_var = (1.0 - spec.rho * spec.rho) * diffusive * diffusive +
                            n * lambda0 * jump * jump;
        report.theory_drift = spec.r * report.pi0 + spec.alpha * std::sqrt(report.theory_var);
        report.per_contract_var = report.empirical_var / (static_cast<double>(n) * n);
        const double per_contract_price = report.price0 / n;
        report.death_var_limit = lambda0 * per_contract_price * per_contract_price / n;
    }

    report.mean_death_fraction =
        compensated_sum(deaths_total) / (n_d * static_cast<double>(n));
    report.survival_fraction = compensated_sum(alive_end) / (n_d * static_cast<double>(n));
    report.max_self_financing_residual =
        *std::max_element(fin_residual.begin(), fin_residual.end());
    report.mean_terminal_pnl = compensated_sum(terminal_pnl) / n_d;
    return report;
}

}  // namespace qfhedge
