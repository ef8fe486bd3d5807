#pragma once

#include <vector>

#include "qfhedge/grid.hpp"
#include "qfhedge/model.hpp"

namespace qfhedge {

/// Inputs for one solve of the transformed equation on y = ln(lambda - floor),
/// tau = T - t:
///
///   u_tau = drift_hat u_y + vol^2/2 u_yy - level (e^y + floor) (u - source)
///           + sharpe * sqrt((1-rho^2) vol^2 u_y^2
///                           + level (e^y + floor) (u - source)^2)
///
/// The square-root term is present only when `nonlinear` is set; `source` is
/// the previous recursion level (identically zero when source_surface is null).
struct PdeCoefficients {
    double drift_hat;  // y-drift, includes the -vol^2/2 Ito correction
    double vol;
    double floor;
    double sharpe;
    double rho;
    bool nonlinear;
    int level;        // n >= 1; multiplies the killing/death-jump term
    double terminal;  // value at tau = 0
    const PriceSurface* source_surface;  // psi^{(n-1)}, nullptr for zero
};

/// Single-contract mortality price factor psi(lambda^P, t); the full price is
/// e^{-r(T-t)} * psi.
PriceSurface solve_psi_single(const PopulationPair& pops, const MarketSpec& spec,
                              const Grid1D& grid);

/// The n-contract recursion psi^(1), ..., psi^(n); element k-1 holds psi^(k)
/// with terminal value k. solve_psi_n(..., 1) runs the identical code path as
/// solve_psi_single.
std::vector<PriceSurface> solve_psi_n(const PopulationPair& pops, const MarketSpec& spec,
                                      const Grid1D& grid, int n);

/// Limiting per-contract factor beta: the linear equation with the hedged
/// drift from effective_limit_drift and no square-root source.
PriceSurface solve_beta(const PopulationPair& pops, const MarketSpec& spec,
                        const Grid1D& grid);

/// Reference-population survival factor phi^I(lambda^I, t) =
/// E^Q[exp(-int_t^T lambda^I)], the mortality leg of the q-forward.
PriceSurface solve_survival_factor(const HazardParams& reference, const MarketSpec& spec,
                                   const Grid1D& grid);

}  // namespace qfhedge
