#include "qfhedge/model.hpp"

#include <cmath>
#include <string>

namespace qfhedge {

namespace {

void validate_hazard(const HazardParams& hp, const char* label) {
    if (!(hp.b > 0.0)) {
        throw NonPositiveVolatility(std::string(label) + ": volatility b must be > 0");
    }
    if (!(hp.lambda_floor > 0.0)) {
        throw ConfigError(std::string(label) + ": lambda_floor must be > 0");
    }
}

}  // namespace

void validate(const MarketSpec& spec, const PopulationPair& pops) {
    validate_hazard(pops.insured, "insured");
    validate_hazard(pops.reference, "reference");

    if (!(spec.maturity > 0.0)) {
        throw ConfigError("maturity must be > 0");
    }
    if (spec.r < 0.0) {
        throw ConfigError("short rate r must be >= 0");
    }
    if (!(spec.rho >= -1.0 && spec.rho <= 1.0)) {
        throw RhoOutOfRange("rho must lie in [-1, 1]");
    }
    if (spec.alpha < 0.0 || spec.alpha > std::sqrt(pops.insured.lambda_floor)) {
        throw AlphaTooLarge("alpha must satisfy 0 <= alpha <= sqrt(insured lambda_floor)");
    }
    if (!(pops.initial_insured > pops.insured.lambda_floor)) {
        throw InitialBelowFloor("lambda_p0 must be strictly above the insured floor");
    }
    if (!(pops.initial_reference > pops.reference.lambda_floor)) {
        throw InitialBelowFloor("lambda_i0 must be strictly above the reference floor");
    }
}

double risk_neutral_drift_p(const PopulationPair& pops, const MarketSpec& spec) {
    return pops.insured.a - spec.rho * spec.q_mort * pops.insured.b;
}

double risk_neutral_drift_i(const PopulationPair& pops, const MarketSpec& spec) {
    return pops.reference.a - spec.q_mort * pops.reference.b;
}

double effective_limit_drift(const PopulationPair& pops, const MarketSpec& spec) {
    const double loading = spec.rho * spec.q_mort +
                           spec.alpha * std::sqrt(1.0 - spec.rho * spec.rho);
    return pops.insured.a - loading * pops.insured.b;
}

double survivor_bound(const MarketSpec& spec, const PopulationPair& pops, double t) {
    const double floor = pops.insured.lambda_floor;
    const double rate = floor - spec.alpha * std::sqrt(floor);
    return std::exp(-rate * (spec.maturity - t));
}

double limit_gap_bound(const MarketSpec& spec, const PopulationPair& pops, int n) {
    const double root = std::sqrt(2.0 * pops.insured.lambda_floor);
    if (root <= spec.alpha) {
        throw DegenerateBound("sqrt(2*lambda_floor) <= alpha: gap bound is vacuous");
    }
    const double j_const = spec.alpha * std::sqrt(2.0) / (root - spec.alpha);
    return 1.0 / n + 2.0 * j_const / std::sqrt(static_cast<double>(n));
}

}  // namespace qfhedge
