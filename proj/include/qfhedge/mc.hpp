#pragma once

#include <cstdint>
#include <vector>

#include "qfhedge/model.hpp"
#include "qfhedge/rng.hpp"

namespace qfhedge {

/// Probability measure under which paths are drawn. Tilted shifts the insured
/// drift by -alpha*sqrt(1-rho^2)*b^P on top of the risk-neutral change; the
/// reference hazard keeps its risk-neutral drift in all non-physical cases.
enum class MeasureTag { Physical, RiskNeutral, Tilted };

/// Measure-resolved constant drifts for the two hazards.
struct MeasureDrifts {
    double drift_p;
    double drift_i;
};

MeasureDrifts resolve_drifts(const PopulationPair& pops, const MarketSpec& spec,
                             MeasureTag measure);

/// Exact one-step transition of the correlated pair in log space:
///   x <- x * exp((a_m - b^2/2) dt + b sqrt(dt) z),  x = lambda - floor,
/// with z_p = rho * z_i + sqrt(1-rho^2) * z_perp. Hazards never touch their
/// floors and no state-discretization bias is introduced.
class TwoFactorStepper {
public:
    TwoFactorStepper(const PopulationPair& pops, const MarketSpec& spec, MeasureTag measure,
                     double dt);

    /// Advances excess hazards x_p = lambda_p - floor_p, x_i = lambda_i - floor_i.
    void advance(CounterRng& rng, double& x_p, double& x_i) const {
        const double z_i = rng.next_normal();
        const double z_perp = rng.next_normal();
        const double z_p = rho_ * z_i + rho_comp_ * z_perp;
        x_p *= std::exp(log_drift_p_ + vol_step_p_ * z_p);
        x_i *= std::exp(log_drift_i_ + vol_step_i_ * z_i);
    }

    double dt() const { return dt_; }

private:
    double log_drift_p_, vol_step_p_;
    double log_drift_i_, vol_step_i_;
    double rho_, rho_comp_;
    double dt_;
};

/// Simulated hazard paths with trapezoid cumulative integrals. Layout is
/// path-major: value(path, step) = data[path * (n_steps + 1) + step].
struct PathBundle {
    std::vector<double> times;  // n_steps + 1 sample times
    std::size_t n_paths = 0;
    int n_steps = 0;
    std::uint64_t seed = 0;
    std::vector<double> lambda_p;
    std::vector<double> lambda_i;
    std::vector<double> integral_p;  // per-path trapezoid of lambda_p over [0, horizon]
    std::vector<double> integral_i;

    double lp(std::size_t path, int step) const {
        return lambda_p[path * (n_steps + 1) + step];
    }
    double li(std::size_t path, int step) const {
        return lambda_i[path * (n_steps + 1) + step];
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Draws n_paths correlated hazard paths over [0, horizon] under the chosen
/// measure. Bitwise deterministic in (seed, n_paths, n_steps) regardless of
/// how many worker threads execute the batch.
PathBundle simulate_paths(const PopulationPair& pops, const MarketSpec& spec,
                          MeasureTag measure, std::size_t n_paths, int n_steps,
                          double horizon, std::uint64_t seed);

/// E^Q[exp(-int_0^T lambda^P)] started from lambda_p0: the alpha = 0 price
/// factor, the Feynman-Kac twin of the linear psi equation.
McEstimate estimate_alpha0(const PopulationPair& pops, const MarketSpec& spec,
                           double lambda_p0, std::size_t n_paths, int n_steps,
                           std::uint64_t seed);

/// Same functional under the tilted measure: the limiting factor beta.
McEstimate estimate_beta(const PopulationPair& pops, const MarketSpec& spec, double lambda_p0,
                         std::size_t n_paths, int n_steps, std::uint64_t seed);

/// E^Q[exp(-int_0^T lambda^I)]: the q-forward delivery price K.
McEstimate estimate_qforward_strike(const HazardParams& reference, const MarketSpec& spec,
                                    double lambda_i0, std::size_t n_paths, int n_steps,
                                    std::uint64_t seed);

/// Mean and standard error of a per-path sample, reduced in index order.
McEstimate reduce_sample(const std::vector<double>& sample);

}  // namespace qfhedge
