#include "qfhedge/checks.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qfhedge/mc.hpp"
#include "qfhedge/pde.hpp"

namespace qfhedge {

namespace {

std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double max_over_nodes(const PriceSurface& s, const auto& node_fn) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= s.grid().j_count; ++j) {
        for (int i = 0; i <= s.grid().i_count; ++i) {
            worst = std::max(worst, node_fn(i, j));
        }
    }
    return worst;
}

CheckResult violation_check(std::string name, double observed, double tolerance) {
    return {std::move(name), 0.0, observed, tolerance, observed <= tolerance};
}

}  // namespace

std::vector<CheckResult> check_pde_mc_equivalence(const RunConfig& cfg) {
    static constexpr double param_sets[5][2] = {
        {-0.5, -0.05}, {0.0, 0.0}, {0.5, 0.05}, {0.8, 0.15}, {1.0, 0.0}};

    // One halving of both steps keeps solver bias well under the 3-standard-
    // error band of the estimators at the configured path count.
    const Grid1D fine = build_grid(cfg.grid_m, 2 * cfg.grid_i, 2 * cfg.grid_j,
                                   cfg.market.maturity);
    const double lambda0 = cfg.pops.initial_insured;

    std::vector<CheckResult> out;
    for (const auto& [rho, q] : param_sets) {
        MarketSpec market = cfg.market;
        market.rho = rho;
        market.q_mort = q;
        const std::string suffix = "_rho" + tag(rho) + "_q" + tag(q);

        MarketSpec linear = market;
        linear.alpha = 0.0;
        const PriceSurface psi0 = solve_psi_single(cfg.pops, linear, fine);
        const McEstimate mc0 = estimate_alpha0(cfg.pops, market, lambda0, cfg.mc_paths,
                                               cfg.mc_steps, cfg.seed);
        const double pde0 = psi0.value(lambda0, 0.0);
        out.push_back({"pde_mc_alpha0" + suffix, mc0.mean, pde0, 3.0 * mc0.std_error,
                       std::abs(pde0 - mc0.mean) <= 3.0 * mc0.std_error});

        const PriceSurface beta = solve_beta(cfg.pops, market, fine);
        const McEstimate mcb = estimate_beta(cfg.pops, market, lambda0, cfg.mc_paths,
                                             cfg.mc_steps, cfg.seed + 1);
        const double pdeb = beta.value(lambda0, 0.0);
        out.push_back({"pde_mc_beta" + suffix, mcb.mean, pdeb, 3.0 * mcb.std_error,
                       std::abs(pdeb - mcb.mean) <= 3.0 * mcb.std_error});
    }
    return out;
}

std::vector<CheckResult> check_property_suite(const RunConfig& cfg) {
    static constexpr double rhos[3] = {-0.5, 0.0, 0.8};
    static constexpr double qs[3] = {-0.05, 0.05, 0.15};
    constexpr int depth = 5;

    const Grid1D grid = cfg.grid();
    const double alpha_hi = cfg.market.alpha;
    const double alpha_lo = 0.5 * cfg.market.alpha;
    const double floor_p = cfg.pops.insured.lambda_floor;
    const double mu1 = floor_p - alpha_hi * std::sqrt(floor_p);

    std::vector<CheckResult> out;

    // At rho = 0 the equation no longer sees q, so one stack covers that row
    // and doubles as the no-hedging benchmark.
    MarketSpec unhedged = cfg.market;
    unhedged.rho = 0.0;
    const std::vector<PriceSurface> stack_rho0 = solve_psi_n(cfg.pops, unhedged, grid, depth);

    std::vector<std::vector<PriceSurface>> row_stacks(3);  // per q, at current rho
    for (const double rho : rhos) {
        for (int qi = 0; qi < 3; ++qi) {
            MarketSpec market = cfg.market;
            market.rho = rho;
            market.q_mort = qs[qi];
            const std::string cell = "_rho" + tag(rho) + "_q" + tag(qs[qi]);

            const std::vector<PriceSurface> stack =
                rho == 0.0 ? stack_rho0 : solve_psi_n(cfg.pops, market, grid, depth);

            MarketSpec low = market;
            low.alpha = alpha_lo;
            const std::vector<PriceSurface> stack_lo = solve_psi_n(cfg.pops, low, grid, depth);
            const PriceSurface beta = solve_beta(cfg.pops, market, grid);

            double bound_viol = -1.0;
            double mono_viol = -1.0;
            double alpha_viol = -1.0;
            double slope_viol = -1.0;
            double per_contract_viol = -1.0;
            double beta_floor_viol = -1.0;
            for (int n = 1; n <= depth; ++n) {
                const PriceSurface& cur = stack[n - 1];
                bound_viol = std::max(
                    bound_viol, max_over_nodes(cur, [&](int i, int j) {
                        const double cap = n * std::exp(-mu1 * grid.tau(j));
                        return std::max(cur.at(i, j) - cap, -cur.at(i, j));
                    }));
                mono_viol = std::max(mono_viol, max_over_nodes(cur, [&](int i, int j) {
                                         const double below =
                                             n > 1 ? stack[n - 2].at(i, j) : 0.0;
                                         return below - cur.at(i, j);
                                     }));
                alpha_viol = std::max(alpha_viol, max_over_nodes(cur, [&](int i, int j) {
                                          return stack_lo[n - 1].at(i, j) - cur.at(i, j);
                                      }));
                const double h = grid.h();
                slope_viol = std::max(slope_viol, max_over_nodes(cur, [&](int i, int j) {
                    if (i == 0 || i == grid.i_count) {
                        return -std::numeric_limits<double>::infinity();
                    }
                    return (cur.at(i + 1, j) - cur.at(i - 1, j)) / (2.0 * h);
                }));
                if (n > 1) {
                    per_contract_viol = std::max(
                        per_contract_viol, max_over_nodes(cur, [&](int i, int j) {
                            return cur.at(i, j) / n - stack[n - 2].at(i, j) / (n - 1);
                        }));
                }
                beta_floor_viol = std::max(
                    beta_floor_viol, max_over_nodes(cur, [&](int i, int j) {
                        return beta.at(i, j) - cur.at(i, j) / n;
                    }));
            }
            double subadd_viol = -1.0;
            for (const auto& [m, k] : {std::pair{1, 1}, {1, 2}, {2, 3}}) {
                subadd_viol = std::max(
                    subadd_viol, max_over_nodes(stack[m + k - 1], [&](int i, int j) {
                        return stack[m + k - 1].at(i, j) - stack[m - 1].at(i, j) -
                               stack[k - 1].at(i, j);
                    }));
            }

            out.push_back(violation_check("p1_bound" + cell, bound_viol, 1e-6));
            out.push_back(violation_check("p2_mono_n" + cell, mono_viol, 1e-8));
            out.push_back(violation_check("p3_alpha_mono" + cell, alpha_viol, 1e-8));
            out.push_back(violation_check("p5_slope" + cell, slope_viol, 1e-6));
            out.push_back(violation_check("p8_subadd" + cell, subadd_viol, 1e-8));
            out.push_back(
                violation_check("prop_per_contract_dec" + cell, per_contract_viol, 1e-8));
            out.push_back(
                violation_check("psi_over_n_ge_beta" + cell, beta_floor_viol, 1e-8));

            if (rho * qs[qi] <= 0.0 && rho != 0.0) {
                double hedged_viol = -1.0;
                for (int n = 1; n <= depth; ++n) {
                    hedged_viol = std::max(
                        hedged_viol, max_over_nodes(stack[n - 1], [&](int i, int j) {
                            return stack[n - 1].at(i, j) - stack_rho0[n - 1].at(i, j);
                        }));
                }
                out.push_back(violation_check("thm_rho_q_le_0" + cell, hedged_viol, 1e-8));
            }
            row_stacks[qi] = stack;
        }

        // q-monotonicity along the row: increasing q raises psi when rho > 0,
        // lowers it when rho < 0, and changes nothing at rho = 0.
        for (int qi = 0; qi + 1 < 3; ++qi) {
            const std::string pair_tag =
                "_rho" + tag(rho) + "_q" + tag(qs[qi]) + "_vs_q" + tag(qs[qi + 1]);
            double viol = -1.0;
            for (int n = 1; n <= depth; ++n) {
                const PriceSurface& lo_q = row_stacks[qi][n - 1];
                const PriceSurface& hi_q = row_stacks[qi + 1][n - 1];
                viol = std::max(viol, max_over_nodes(lo_q, [&](int i, int j) {
                                    const double diff = hi_q.at(i, j) - lo_q.at(i, j);
                                    if (rho > 0.0) return -diff;
                                    if (rho < 0.0) return diff;
                                    return std::abs(diff);
                                }));
            }
            if (rho == 0.0) {
                out.push_back(violation_check("rho0_q_invariance" + pair_tag, viol, 0.0));
            } else {
                out.push_back(violation_check("p6_q_mono" + pair_tag, viol, 1e-8));
            }
        }
    }

    // Reference-population independence: the insured-leg estimator cannot see
    // the reference parameters when q is constant, so perturbing them leaves
    // the estimate bit-identical.
    {
        MarketSpec market = cfg.market;
        market.rho = 0.5;
        market.q_mort = 0.05;
        PopulationPair moved = cfg.pops;
        moved.reference.a += 0.03;
        moved.initial_reference = moved.reference.lambda_floor +
                                  1.5 * (moved.initial_reference - moved.reference.lambda_floor);
        const std::size_t paths = std::min<std::size_t>(cfg.mc_paths, 20000);
        const McEstimate base = estimate_alpha0(cfg.pops, market, cfg.pops.initial_insured,
                                                paths, 100, cfg.seed);
        const McEstimate perturbed = estimate_alpha0(moved, market, cfg.pops.initial_insured,
                                                     paths, 100, cfg.seed);
        out.push_back(violation_check("p10_reference_independence",
                                      std::abs(base.mean - perturbed.mean), 0.0));
    }
    return out;
}

std::vector<CheckResult> check_limit_gap(const RunConfig& cfg) {
    constexpr int levels[] = {1, 2, 5, 10, 25};
    constexpr int depth = 25;

    MarketSpec market = cfg.market;
    market.rho = 0.5;
    market.q_mort = 0.05;

    const Grid1D grid = cfg.grid();
    const std::vector<PriceSurface> stack = solve_psi_n(cfg.pops, market, grid, depth);
    const PriceSurface beta = solve_beta(cfg.pops, market, grid);

    std::vector<CheckResult> out;
    for (const int n : levels) {
        const PriceSurface& cur = stack[n - 1];
        const double gap = max_over_nodes(cur, [&](int i, int j) {
            return cur.at(i, j) / n - beta.at(i, j);
        });
        const double lower = max_over_nodes(cur, [&](int i, int j) {
            return beta.at(i, j) - cur.at(i, j) / n;
        });
        const double bound = limit_gap_bound(market, cfg.pops, n) + 0.01;
        out.push_back(violation_check("limit_gap_n" + std::to_string(n), gap, bound));
        out.push_back(
            violation_check("limit_gap_lower_n" + std::to_string(n), lower, 1e-8));
    }
    return out;
}

std::vector<CheckResult> check_grid_convergence(const RunConfig& cfg) {
    const double lambda0 = cfg.pops.initial_insured;

    // Query the coarse-grid node nearest lambda0; it stays a node under
    // halving, so refinement differences are free of interpolation error.
    const Grid1D coarse = cfg.grid();
    const double y0 = std::log(lambda0 - cfg.pops.insured.lambda_floor);
    const int i_star = static_cast<int>(std::lround((y0 + cfg.grid_m) / coarse.h()));
    std::vector<double> psi_vals;
    std::vector<double> beta_vals;
    for (const int mult : {1, 2, 4}) {
        const Grid1D grid = build_grid(cfg.grid_m, mult * cfg.grid_i, mult * cfg.grid_j,
                                       cfg.market.maturity);
        const PriceSurface psi = solve_psi_single(cfg.pops, cfg.market, grid);
        const PriceSurface beta = solve_beta(cfg.pops, cfg.market, grid);
        psi_vals.push_back(psi.at(mult * i_star, grid.j_count));
        beta_vals.push_back(beta.at(mult * i_star, grid.j_count));
    }

    std::vector<CheckResult> out;
    const auto emit = [&](const char* label, const std::vector<double>& v) {
        const double d1 = std::abs(v[1] - v[0]);
        const double d2 = std::abs(v[2] - v[1]);
        const double ratio = d2 / d1;
        out.push_back({std::string("conv_first_diff_") + label, 0.0, d1, 1.0, d1 < 1.0});
        out.push_back({std::string("conv_ratio_") + label, 0.5, ratio, 0.2,
                       std::abs(ratio - 0.5) <= 0.2});
    };
    emit("psi", psi_vals);
    emit("beta", beta_vals);
    return out;
}

std::vector<CheckResult> run_validation_battery(const RunConfig& cfg) {
    std::vector<CheckResult> all;
    const auto append = [&](std::vector<CheckResult> group) {
        all.insert(all.end(), group.begin(), group.end());
    };
    append(check_pde_mc_equivalence(cfg));
    append(check_property_suite(cfg));
    append(check_limit_gap(cfg));
    append(check_grid_convergence(cfg));
    return all;
}

std::string checks_to_csv(const std::vector<CheckResult>& results) {
    std::ostringstream out;
    out << "check,expected,observed,tolerance,verdict\n";
    for (const auto& c : results) {
        out << c.name << ',' << format_number(c.expected) << ',' << format_number(c.observed)
            << ',' << format_number(c.tolerance) << ',' << (c.pass ? "pass" : "FAIL") << '\n';
    }
    return out.str();
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& c : results) {
        if (!c.pass) return false;
    }
    return true;
}

}  // namespace qfhedge
