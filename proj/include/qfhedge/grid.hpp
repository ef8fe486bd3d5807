#pragma once

#include <vector>

#include "qfhedge/model.hpp"

namespace qfhedge {

/// Uniform grid for the log-transformed solver domain
///   y = ln(lambda - floor) in [-M, M],  tau = T - t in [0, T].
struct Grid1D {
    double half_width;  // M
    int i_count;        // I spatial intervals (I + 1 nodes)
    int j_count;        // J time steps (J + 1 levels)
    double maturity;    // T

    double h() const { return 2.0 * half_width / i_count; }
    double k() const { return maturity / j_count; }
    double y(int i) const { return -half_width + i * h(); }
    double tau(int j) const { return j * k(); }
};

/// Validates dimensions and returns the grid. Throws NonPositiveDimension.
Grid1D build_grid(double half_width, int i_count, int j_count, double maturity);

/// Interpolated surface value and its lambda-derivative.
struct SurfacePoint {
    double value;
    double d_lambda;
};

/// Solved values psi_hat(y_i, tau_j) on a Grid1D, addressable in the original
/// (lambda, t) coordinates. Immutable after construction and safe to share.
class PriceSurface {
public:
    PriceSurface(Grid1D grid, double lambda_floor, std::vector<double> values);

    const Grid1D& grid() const { return grid_; }
    double lambda_floor() const { return lambda_floor_; }
    double maturity() const { return grid_.maturity; }

    /// Node value at spatial index i, time index j (tau_j = j * k).
    double at(int i, int j) const { return values_[static_cast<std::size_t>(j) * (grid_.i_count + 1) + i]; }

    /// Bilinear interpolation in (y, tau) plus a central-difference
    /// lambda-derivative (chain rule: psi_lambda = psi_hat_y / (lambda - floor)).
    /// Throws OutOfDomain for queries outside the solved region.
    SurfacePoint lookup(double lambda, double t) const;

    /// Interpolated value only.
    double value(double lambda, double t) const { return lookup(lambda, t).value; }

private:
    Grid1D grid_;
    double lambda_floor_;
    std::vector<double> values_;  // row-major: j * (I + 1) + i
};

/// Discounted monetary value e^{-r (T - t)} * psi(lambda, t).
double price(const PriceSurface& surface, const MarketSpec& spec, double lambda, double t);

}  // namespace qfhedge
