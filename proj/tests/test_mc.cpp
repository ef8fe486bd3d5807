#include <doctest.h>

#include <cmath>
#include <vector>

#include "qfhedge/mc.hpp"
#include "qfhedge/model.hpp"

using namespace qfhedge;

namespace {

MarketSpec base_market() { return {0.04, 0.0, 0.1, 0.0, 10.0}; }

PopulationPair base_pops() {
    const HazardParams hp{0.04, 0.1, 0.02};
    return {hp, hp, 0.06, 0.06};
}

}  // namespace

TEST_CASE("frozen hazard: tiny volatility reproduces the deterministic limit") {
    PopulationPair pops = base_pops();
    pops.insured = {0.0, 1e-8, 0.02};
    pops.reference = pops.insured;
    pops.initial_insured = 0.05;
    pops.initial_reference = 0.05;
    MarketSpec market = base_market();
    market.alpha = 0.0;  // keep alpha <= sqrt(floor) irrelevant to the limit

    const McEstimate survival = estimate_alpha0(pops, market, 0.05, 2000, 100, 5);
    CHECK(survival.mean == doctest::Approx(0.6065306597126334).epsilon(1e-6));
    CHECK(survival.std_error < 1e-7);

    const McEstimate strike = estimate_qforward_strike(pops.reference, market, 0.05, 2000,
                                                       100, 5);
    CHECK(strike.mean == doctest::Approx(0.6065306597126334).epsilon(1e-6));

    const PathBundle bundle =
        simulate_paths(pops, market, MeasureTag::Physical, 200, 50, 10.0, 5);
    for (std::size_t p = 0; p < bundle.n_paths; ++p) {
        CHECK(bundle.lp(p, 50) == doctest::Approx(0.05).epsilon(1e-6));
    }
}

TEST_CASE("terminal hazard mean matches the shifted-lognormal formula") {
    const PathBundle bundle = simulate_paths(base_pops(), base_market(),
                                             MeasureTag::Physical, 50000, 250, 10.0, 11);
    std::vector<double> terminal(bundle.n_paths);
    for (std::size_t p = 0; p < bundle.n_paths; ++p) {
        terminal[p] = bundle.lp(p, bundle.n_steps);
    }
    const McEstimate est = reduce_sample(terminal);
    // floor + (lambda0 - floor) e^{aT} = 0.02 + 0.04 e^{0.4}
    CHECK(std::abs(est.mean - 0.07967298790565082) <= 3.0 * est.std_error);
}

TEST_CASE("perfect correlation drives both hazards with the same noise") {
    MarketSpec market = base_market();
    market.rho = 1.0;
    const PathBundle bundle =
        simulate_paths(base_pops(), market, MeasureTag::Physical, 500, 100, 10.0, 3);
    for (std::size_t p = 0; p < bundle.n_paths; ++p) {
        CHECK(bundle.lp(p, 100) == doctest::Approx(bundle.li(p, 100)).epsilon(1e-12));
    }
}

TEST_CASE("path integrals are non-negative and non-decreasing") {
    const PathBundle bundle = simulate_paths(base_pops(), base_market(),
                                             MeasureTag::Physical, 100, 50, 10.0, 7);
    for (std::size_t p = 0; p < bundle.n_paths; ++p) {
        CHECK(bundle.integral_p[p] > 0.0);
        CHECK(bundle.integral_i[p] > 0.0);
        for (int s = 0; s <= 50; ++s) {
            CHECK(bundle.lp(p, s) > base_pops().insured.lambda_floor);
        }
    }
}

TEST_CASE("estimates respect the Jensen lower bound") {
    const McEstimate est = estimate_alpha0(base_pops(), base_market(), 0.05, 20000, 200, 13);
    // E[int lambda] = floor T + (lambda0 - floor)(e^{aT} - 1)/a with a^{P,Q} = a
    const double mean_integral = 0.5688685232309528;
    CHECK(est.mean >= std::exp(-mean_integral) - 3.0 * est.std_error);
    CHECK(est.mean > 0.0);
    CHECK(est.mean < 1.0);
}

TEST_CASE("identical seeds reproduce results bitwise; different seeds do not") {
    const McEstimate a = estimate_alpha0(base_pops(), base_market(), 0.06, 5000, 100, 99);
    const McEstimate b = estimate_alpha0(base_pops(), base_market(), 0.06, 5000, 100, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);

    const McEstimate c = estimate_alpha0(base_pops(), base_market(), 0.06, 5000, 100, 100);
    CHECK(a.mean != c.mean);

    const PathBundle b1 =
        simulate_paths(base_pops(), base_market(), MeasureTag::RiskNeutral, 64, 32, 10.0, 21);
    const PathBundle b2 =
        simulate_paths(base_pops(), base_market(), MeasureTag::RiskNeutral, 64, 32, 10.0, 21);
    CHECK(b1.lambda_p == b2.lambda_p);
    CHECK(b1.lambda_i == b2.lambda_i);
    CHECK(b1.integral_p == b2.integral_p);
}

TEST_CASE("standard errors shrink like one over sqrt(paths)") {
    const McEstimate small = estimate_beta(base_pops(), base_market(), 0.06, 10000, 100, 31);
    const McEstimate big = estimate_beta(base_pops(), base_market(), 0.06, 40000, 100, 31);
    const double ratio = small.std_error / big.std_error;
    CHECK(ratio > 2.0 * 0.7);
    CHECK(ratio < 2.0 * 1.3);
}

TEST_CASE("measure change shifts the terminal mean in the direction of -rho q") {
    MarketSpec market = base_market();
    market.rho = 0.5;
    market.q_mort = 0.15;  // a^{P,Q} = a - 0.0075 < a

    const PathBundle physical =
        simulate_paths(base_pops(), market, MeasureTag::Physical, 20000, 100, 10.0, 41);
    const PathBundle neutral =
        simulate_paths(base_pops(), market, MeasureTag::RiskNeutral, 20000, 100, 10.0, 41);
    std::vector<double> diff(physical.n_paths);
    for (std::size_t p = 0; p < physical.n_paths; ++p) {
        diff[p] = physical.lp(p, 100) - neutral.lp(p, 100);
    }
    const McEstimate est = reduce_sample(diff);
    CHECK(est.mean - 3.0 * est.std_error > 0.0);
}

TEST_CASE("tilted measure coincides with the risk-neutral one when the tilt vanishes") {
    SUBCASE("alpha = 0") {
        MarketSpec market = base_market();
        market.alpha = 0.0;
        market.rho = 0.4;
        market.q_mort = 0.1;
        const McEstimate q = estimate_alpha0(base_pops(), market, 0.06, 4000, 50, 55);
        const McEstimate tilted = estimate_beta(base_pops(), market, 0.06, 4000, 50, 55);
        CHECK(q.mean == tilted.mean);
    }
    SUBCASE("rho = 1") {
        MarketSpec market = base_market();
        market.rho = 1.0;
        market.q_mort = 0.05;
        const McEstimate q = estimate_alpha0(base_pops(), market, 0.06, 4000, 50, 56);
        const McEstimate tilted = estimate_beta(base_pops(), market, 0.06, 4000, 50, 56);
        CHECK(q.mean == tilted.mean);
    }
}

TEST_CASE("halving the integration step moves estimates by less than one standard error") {
    const McEstimate coarse =
        estimate_alpha0(base_pops(), base_market(), 0.06, 1000000, 250, 77);
    const McEstimate fine =
        estimate_alpha0(base_pops(), base_market(), 0.06, 1000000, 500, 77);
    CHECK(std::abs(coarse.mean - fine.mean) < coarse.std_error);
}

TEST_CASE("estimator rejects a start below the floor") {
    CHECK_THROWS_AS(estimate_alpha0(base_pops(), base_market(), 0.01, 100, 10, 1),
                    InitialBelowFloor);
}
