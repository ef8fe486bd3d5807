#include <doctest.h>

#include <cmath>

#include "qfhedge/mc.hpp"
#include "qfhedge/model.hpp"
#include "qfhedge/pde.hpp"

using namespace qfhedge;

namespace {

MarketSpec base_market() { return {0.04, 0.0, 0.1, 0.0, 10.0}; }

PopulationPair base_pops() {
    const HazardParams hp{0.04, 0.1, 0.02};
    return {hp, hp, 0.06, 0.06};
}

// Coarser grid for unit-level runs; the acceptance suite exercises the
// production resolution.
Grid1D unit_grid() { return build_grid(8.0, 160, 250, 10.0); }

double max_abs_diff(const PriceSurface& a, const PriceSurface& b) {
    double worst = 0.0;
    for (int j = 0; j <= a.grid().j_count; ++j) {
        for (int i = 0; i <= a.grid().i_count; ++i) {
            worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("terminal slice is exactly the terminal value") {
    const PriceSurface psi = solve_psi_single(base_pops(), base_market(), unit_grid());
    for (int i = 0; i <= psi.grid().i_count; ++i) {
        CHECK(psi.at(i, 0) == 1.0);
    }
    const auto stack = solve_psi_n(base_pops(), base_market(), unit_grid(), 3);
    for (int i = 0; i <= stack[2].grid().i_count; ++i) {
        CHECK(stack[2].at(i, 0) == 3.0);
    }
    const PriceSurface beta = solve_beta(base_pops(), base_market(), unit_grid());
    for (int i = 0; i <= beta.grid().i_count; ++i) {
        CHECK(beta.at(i, 0) == 1.0);
    }
}

TEST_CASE("left boundary equals the frozen-hazard formula") {
    const PriceSurface psi = solve_psi_single(base_pops(), base_market(), unit_grid());
    // exp(-(0.02 - 0.1 sqrt(0.02)) * 10) at tau = T
    CHECK(psi.at(0, psi.grid().j_count) ==
          doctest::Approx(0.9431040682305812).epsilon(1e-12));
    CHECK(psi.at(psi.grid().i_count, psi.grid().j_count) == 0.0);
}

TEST_CASE("lookup at t = T returns 1 for psi surfaces") {
    const PriceSurface psi = solve_psi_single(base_pops(), base_market(), unit_grid());
    CHECK(psi.value(0.05, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solve_psi_n(1) runs the identical code path as solve_psi_single") {
    const PriceSurface single = solve_psi_single(base_pops(), base_market(), unit_grid());
    const auto stack = solve_psi_n(base_pops(), base_market(), unit_grid(), 1);
    CHECK(max_abs_diff(single, stack[0]) == 0.0);
}

TEST_CASE("alpha = 0 collapses the recursion to n copies of the single solve") {
    MarketSpec market = base_market();
    market.alpha = 0.0;
    market.rho = 0.3;
    market.q_mort = 0.05;
    const auto stack = solve_psi_n(base_pops(), market, unit_grid(), 5);
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (int j = 0; j <= stack[0].grid().j_count; ++j) {
            for (int i = 0; i <= stack[0].grid().i_count; ++i) {
                worst = std::max(worst,
                                 std::abs(stack[n - 1].at(i, j) - n * stack[0].at(i, j)) / n);
            }
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("per-contract value at n = 50 sits below the single-contract value") {
    const Grid1D grid = build_grid(8.0, 80, 125, 10.0);
    const auto stack = solve_psi_n(base_pops(), base_market(), grid, 50);
    double worst = -1.0;
    for (int j = 0; j <= grid.j_count; ++j) {
        for (int i = 0; i <= grid.i_count; ++i) {
            worst = std::max(worst, stack[49].at(i, j) / 50.0 - stack[0].at(i, j));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("psi stays within the survivor bound band") {
    const MarketSpec market = base_market();
    const PopulationPair pops = base_pops();
    const auto stack = solve_psi_n(pops, market, unit_grid(), 4);
    for (int n = 1; n <= 4; ++n) {
        const PriceSurface& s = stack[n - 1];
        for (int j = 0; j <= s.grid().j_count; ++j) {
            const double cap =
                n * survivor_bound(market, pops, market.maturity - s.grid().tau(j));
            for (int i = 0; i <= s.grid().i_count; ++i) {
                CHECK(s.at(i, j) >= -1e-6);
                CHECK(s.at(i, j) <= cap + 1e-6);
            }
        }
    }
}

TEST_CASE("psi lambda-derivative is non-positive") {
    const PriceSurface psi = solve_psi_single(base_pops(), base_market(), unit_grid());
    const Grid1D& grid = psi.grid();
    for (int j = 0; j <= grid.j_count; ++j) {
        for (int i = 1; i < grid.i_count; ++i) {
            CHECK((psi.at(i + 1, j) - psi.at(i - 1, j)) / (2.0 * grid.h()) <= 1e-6);
        }
    }
    CHECK(psi.lookup(0.05, 3.0).d_lambda <= 1e-6);
}

TEST_CASE("beta is monotone in the hedged drift") {
    MarketSpec cheap = base_market();
    cheap.rho = 0.8;
    cheap.q_mort = 0.05;  // rho q > 0 lowers the drift, raising beta
    MarketSpec dear = base_market();
    dear.rho = 0.8;
    dear.q_mort = -0.05;
    REQUIRE(effective_limit_drift(base_pops(), cheap) <
            effective_limit_drift(base_pops(), dear));

    const PriceSurface beta_lo_drift = solve_beta(base_pops(), cheap, unit_grid());
    const PriceSurface beta_hi_drift = solve_beta(base_pops(), dear, unit_grid());
    double worst = -1.0;
    for (int j = 0; j <= unit_grid().j_count; ++j) {
        for (int i = 0; i <= unit_grid().i_count; ++i) {
            worst = std::max(worst, beta_hi_drift.at(i, j) - beta_lo_drift.at(i, j));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("survival factor with mirrored parameters reproduces beta at alpha = rho = 0") {
    MarketSpec market = base_market();
    market.alpha = 0.0;
    market.rho = 0.0;
    market.q_mort = 0.0;
    const PriceSurface beta = solve_beta(base_pops(), market, unit_grid());
    const PriceSurface phi =
        solve_survival_factor(base_pops().reference, market, unit_grid());
    CHECK(max_abs_diff(beta, phi) == 0.0);
}

TEST_CASE("survival factor stays in (0, 1] with terminal value 1") {
    MarketSpec market = base_market();
    market.q_mort = 0.15;
    const PriceSurface phi =
        solve_survival_factor(base_pops().reference, market, unit_grid());
    for (int i = 0; i <= phi.grid().i_count; ++i) {
        CHECK(phi.at(i, 0) == 1.0);
    }
    for (int j = 1; j <= phi.grid().j_count; ++j) {
        for (int i = 0; i < phi.grid().i_count; ++i) {
            CHECK(phi.at(i, j) > 0.0);
            CHECK(phi.at(i, j) <= 1.0 + 1e-6);
        }
    }
}

TEST_CASE("alpha = 0 psi agrees with the Feynman-Kac oracle") {
    MarketSpec market = base_market();
    market.alpha = 0.0;
    const PriceSurface psi =
        solve_psi_single(base_pops(), market, build_grid(8.0, 640, 1000, 10.0));
    const McEstimate mc = estimate_alpha0(base_pops(), market, 0.05, 20000, 200, 91);
    CHECK(std::abs(psi.value(0.05, 0.0) - mc.mean) <= 3.0 * mc.std_error);
}

TEST_CASE("beta agrees with the tilted-measure oracle at several starts") {
    MarketSpec market = base_market();
    market.rho = 0.5;
    market.q_mort = 0.05;
    const PriceSurface beta =
        solve_beta(base_pops(), market, build_grid(8.0, 640, 1000, 10.0));
    for (const double lambda0 : {0.04, 0.06, 0.08}) {
        const McEstimate mc = estimate_beta(base_pops(), market, lambda0, 20000, 200, 17);
        CHECK(std::abs(beta.value(lambda0, 0.0) - mc.mean) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("survival factor agrees with the strike oracle") {
    MarketSpec market = base_market();
    market.q_mort = 0.05;
    const PriceSurface phi = solve_survival_factor(base_pops().reference, market,
                                                   build_grid(8.0, 640, 1000, 10.0));
    const McEstimate mc =
        estimate_qforward_strike(base_pops().reference, market, 0.06, 20000, 200, 23);
    CHECK(std::abs(phi.value(0.06, 0.0) - mc.mean) <= 3.0 * mc.std_error);
}

TEST_CASE("halving both steps halves the error: first-order convergence") {
    const PopulationPair pops = base_pops();
    const MarketSpec market = base_market();
    const double y0 = std::log(pops.initial_insured - pops.insured.lambda_floor);

    const Grid1D coarse = build_grid(8.0, 160, 250, 10.0);
    const int i_star = static_cast<int>(std::lround((y0 + 8.0) / coarse.h()));
    double values[3];
    int mult = 1;
    for (int level = 0; level < 3; ++level, mult *= 2) {
        const Grid1D grid = build_grid(8.0, 160 * mult, 250 * mult, 10.0);
        const PriceSurface psi = solve_psi_single(pops, market, grid);
        values[level] = psi.at(i_star * mult, grid.j_count);
    }
    const double d1 = std::abs(values[1] - values[0]);
    const double d2 = std::abs(values[2] - values[1]);
    CHECK(d2 < d1);
    CHECK(d2 / d1 > 0.3);
    CHECK(d2 / d1 < 0.7);
}

TEST_CASE("invalid configurations are rejected before solving") {
    MarketSpec market = base_market();
    market.alpha = 0.2;
    CHECK_THROWS_AS(solve_psi_single(base_pops(), market, unit_grid()), AlphaTooLarge);
    CHECK_THROWS_AS(solve_psi_n(base_pops(), base_market(), unit_grid(), 0), ConfigError);
}
