#pragma once

#include "qfhedge/errors.hpp"

namespace qfhedge {

/// Constant-coefficient hazard diffusion
///   d lambda = a (lambda - floor) dt + b (lambda - floor) dW,
/// so lambda - floor is a geometric Brownian motion staying above zero.
struct HazardParams {
    double a;             // drift coefficient (1/year)
    double b;             // volatility coefficient (1/sqrt(year)), > 0
    double lambda_floor;  // minimum hazard rate, > 0
};

/// Market-wide pricing inputs shared by all solvers.
struct MarketSpec {
    double r;         // constant short rate, >= 0
    double q_mort;    // market price of mortality risk for the reference hazard
    double alpha;     // instantaneous Sharpe ratio, 0 <= alpha <= sqrt(insured floor)
    double rho;       // correlation between the two hazard drivers, in [-1, 1]
    double maturity;  // contract maturity T (years), > 0
};

/// Insured population (carries the endowment) and reference population
/// (underlies the q-forward), with their time-0 hazard levels.
struct PopulationPair {
    HazardParams insured;
    HazardParams reference;
    double initial_insured;    // lambda^P_0, strictly above insured floor
    double initial_reference;  // lambda^I_0, strictly above reference floor
};

/// Checks every invariant of the configuration; throws a ConfigError
/// subclass naming the violated constraint, returns normally otherwise.
void validate(const MarketSpec& spec, const PopulationPair& pops);

/// Risk-neutral drift of the insured hazard: a^P - rho * q * b^P.
double risk_neutral_drift_p(const PopulationPair& pops, const MarketSpec& spec);

/// Risk-neutral drift of the reference hazard: a^I - q * b^I.
double risk_neutral_drift_i(const PopulationPair& pops, const MarketSpec& spec);

/// Drift governing the limiting per-contract price:
///   a^P - (rho * q + alpha * sqrt(1 - rho^2)) * b^P.
double effective_limit_drift(const PopulationPair& pops, const MarketSpec& spec);

/// Upper-bound factor h(t) = exp(-(floor - alpha*sqrt(floor)) (T - t)) for the
/// insured population; any solved psi^(n) must stay below n * h(t).
double survivor_bound(const MarketSpec& spec, const PopulationPair& pops, double t);

/// Uniform bound on |psi^(n)/n - beta|: 1/n + 2J/sqrt(n) with
/// J = alpha*sqrt(2) / (sqrt(2*floor) - alpha). Throws DegenerateBound when
/// the denominator is not positive.
double limit_gap_bound(const MarketSpec& spec, const PopulationPair& pops, int n);

}  // namespace qfhedge
