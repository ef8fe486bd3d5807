#include "qfhedge/pde.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qfhedge/errors.hpp"
#include "qfhedge/tridiag.hpp"

namespace qfhedge {

namespace {

// Left-boundary values solve the frozen-hazard equation at lambda = floor,
//   dB^(n)/dtau = -mu_n (B^(n) - B^(n-1)),  B^(n)(0) = n,
// with mu_m = m*floor - sharpe*sqrt(m*floor). Each level is an exponential
// mixture sum_i coef_i exp(-mu_i tau); the recursion below carries the exact
// coefficients so that level scaling survives to rounding when sharpe = 0.
struct BoundaryMix {
    std::vector<double> decay;  // mu_1 .. mu_n
    std::vector<double> coef;

    double eval(double tau) const {
        double v = 0.0;
        for (std::size_t i = 0; i < coef.size(); ++i) {
            v += coef[i] * std::exp(-decay[i] * tau);
        }
        return v;
    }
};

BoundaryMix next_boundary_mix(const BoundaryMix& prev, int level, double floor, double sharpe) {
    const double mu_n = level * floor - sharpe * std::sqrt(level * floor);
    BoundaryMix mix;
    mix.decay = prev.decay;
    mix.coef.resize(prev.coef.size());
    double partial = 0.0;
    for (std::size_t i = 0; i < prev.coef.size(); ++i) {
        mix.coef[i] = mu_n * prev.coef[i] / (mu_n - prev.decay[i]);
        partial += mix.coef[i];
    }
    mix.decay.push_back(mu_n);
    mix.coef.push_back(level - partial);
    return mix;
}

// One backward-in-t sweep of the semi-implicit scheme: diffusion, drift and
// the killing/death-jump term are implicit at the new level; the square-root
// source is evaluated at the old level. bound_rate fixes the admissible band
// [0, terminal * exp(-bound_rate * tau)] used to detect instability.
PriceSurface solve_scheme(const PdeCoefficients& c, const Grid1D& grid,
                          const BoundaryMix& left_bc, double bound_rate) {
    const int ni = grid.i_count;
    const int nj = grid.j_count;
    const double h = grid.h();
    const double k = grid.k();
    const int inner = ni - 1;

    std::vector<double> values(static_cast<std::size_t>(nj + 1) * (ni + 1), c.terminal);

    std::vector<double> kill(ni + 1);  // level * (e^{y_i} + floor)
    for (int i = 0; i <= ni; ++i) {
        kill[i] = c.level * (std::exp(grid.y(i)) + c.floor);
    }

    const double diffusion = c.vol * c.vol * k / (h * h);
    const double sub = c.drift_hat * k / (2.0 * h) - 0.5 * diffusion;
    const double sup = -c.drift_hat * k / (2.0 * h) - 0.5 * diffusion;

    std::vector<double> sub_v(inner - 1, sub);
    std::vector<double> sup_v(inner - 1, sup);
    std::vector<double> diag(inner);
    for (int i = 1; i < ni; ++i) {
        diag[i - 1] = 1.0 + diffusion + k * kill[i];
    }

    std::vector<double> rhs(inner);
    std::vector<double> sol(inner);
    std::vector<double> scratch(inner);

    const double cross_vol2 = (1.0 - c.rho * c.rho) * c.vol * c.vol;
    const double band_eps = 1e-6;

    for (int j = 0; j < nj; ++j) {
        const double* old_row = values.data() + static_cast<std::size_t>(j) * (ni + 1);
        double* new_row = values.data() + static_cast<std::size_t>(j + 1) * (ni + 1);
        const double lb_new = left_bc.eval(grid.tau(j + 1));

        for (int i = 1; i < ni; ++i) {
            double source = old_row[i];
            if (c.source_surface != nullptr) {
                source += k * kill[i] * c.source_surface->at(i, j + 1);
            }
            if (c.nonlinear) {
                const double slope = (old_row[i + 1] - old_row[i - 1]) / (2.0 * h);
                const double gap =
                    old_row[i] - (c.source_surface ? c.source_surface->at(i, j) : 0.0);
                const double a_ij =
                    std::sqrt(cross_vol2 * slope * slope + kill[i] * gap * gap);
                source += c.sharpe * k * a_ij;
            }
            rhs[i - 1] = source;
        }
        rhs[0] -= sub * lb_new;
        // Right boundary is identically zero, so no correction on the last row.

        tridiagonal_solve(sub_v, diag, sup_v, rhs, sol, scratch);

        new_row[0] = lb_new;
        new_row[ni] = 0.0;
        const double cap = c.terminal * std::exp(-bound_rate * grid.tau(j + 1)) + band_eps;
        for (int i = 1; i < ni; ++i) {
            const double v = sol[i - 1];
            if (!(v >= -band_eps && v <= cap)) {
                throw NonConvergedGrid("surface value " + std::to_string(v) +
                                       " outside [0, " + std::to_string(cap) +
                                       "] at time step " + std::to_string(j + 1));
            }
            new_row[i] = v;
        }
    }

    return PriceSurface(grid, c.floor, std::move(values));
}

}  // namespace

std::vector<PriceSurface> solve_psi_n(const PopulationPair& pops, const MarketSpec& spec,
                                      const Grid1D& grid, int n) {
    validate(spec, pops);
    if (n < 1) {
        throw ConfigError("contract count n must be >= 1");
    }

    const HazardParams& hp = pops.insured;
    const double drift_hat = risk_neutral_drift_p(pops, spec) - 0.5 * hp.b * hp.b;
    const double bound_rate = hp.lambda_floor - spec.alpha * std::sqrt(hp.lambda_floor);

    std::vector<PriceSurface> stack;
    stack.reserve(n);
    BoundaryMix mix;  // level 0: identically zero
    for (int level = 1; level <= n; ++level) {
        mix = next_boundary_mix(mix, level, hp.lambda_floor, spec.alpha);
        PdeCoefficients c{drift_hat,
                          hp.b,
                          hp.lambda_floor,
                          spec.alpha,
                          spec.rho,
                          true,
                          level,
                          static_cast<double>(level),
                          level > 1 ? &stack[level - 2] : nullptr};
        stack.push_back(solve_scheme(c, grid, mix, bound_rate));
    }
    return stack;
}

PriceSurface solve_psi_single(const PopulationPair& pops, const MarketSpec& spec,
                              const Grid1D& grid) {
    return std::move(solve_psi_n(pops, spec, grid, 1).front());
}

PriceSurface solve_beta(const PopulationPair& pops, const MarketSpec& spec,
                        const Grid1D& grid) {
    validate(spec, pops);
    const HazardParams& hp = pops.insured;
    const double drift_hat = effective_limit_drift(pops, spec) - 0.5 * hp.b * hp.b;
    const double bound_rate = hp.lambda_floor - spec.alpha * std::sqrt(hp.lambda_floor);

    BoundaryMix mix = next_boundary_mix(BoundaryMix{}, 1, hp.lambda_floor, 0.0);
    PdeCoefficients c{drift_hat, hp.b, hp.lambda_floor, 0.0, spec.rho, false, 1, 1.0, nullptr};
    return solve_scheme(c, grid, mix, bound_rate);
}

PriceSurface solve_survival_factor(const HazardParams& reference, const MarketSpec& spec,
                                   const Grid1D& grid) {
    if (!(reference.b > 0.0)) {
        throw NonPositiveVolatility("reference: volatility b must be > 0");
    }
    if (!(reference.lambda_floor > 0.0)) {
        throw ConfigError("reference: lambda_floor must be > 0");
    }
    const double drift_q = reference.a - spec.q_mort * reference.b;
    const double drift_hat = drift_q - 0.5 * reference.b * reference.b;

    BoundaryMix mix = next_boundary_mix(BoundaryMix{}, 1, reference.lambda_floor, 0.0);
    PdeCoefficients c{drift_hat, reference.b, reference.lambda_floor, 0.0, 0.0, false, 1, 1.0,
                      nullptr};
    // Survival factors are plain expectations of a discount, so cap at 1.
    return solve_scheme(c, grid, mix, 0.0);
}

}  // namespace qfhedge
