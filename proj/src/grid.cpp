#include "qfhedge/grid.hpp"

#include <cmath>
#include <utility>

#include "qfhedge/errors.hpp"

namespace qfhedge {

Grid1D build_grid(double half_width, int i_count, int j_count, double maturity) {
    if (!(half_width > 0.0) || !(maturity > 0.0) || i_count < 2 || j_count < 1) {
        throw NonPositiveDimension("grid requires M > 0, T > 0, I >= 2, J >= 1");
    }
    return Grid1D{half_width, i_count, j_count, maturity};
}

PriceSurface::PriceSurface(Grid1D grid, double lambda_floor, std::vector<double> values)
    : grid_(grid), lambda_floor_(lambda_floor), values_(std::move(values)) {}

namespace {

// Fractional index clamped so that interpolation cells stay in range; a hair
// of slack absorbs rounding in queries that target the domain edge exactly.
std::pair<int, double> locate(double frac_index, int last_cell, double slack) {
    if (frac_index < -slack || frac_index > last_cell + 1 + slack) {
        return {-1, 0.0};
    }
    int cell = static_cast<int>(std::floor(frac_index));
    if (cell < 0) cell = 0;
    if (cell > last_cell) cell = last_cell;
    return {cell, frac_index - cell};
}

}  // namespace

SurfacePoint PriceSurface::lookup(double lambda, double t) const {
    const double x = lambda - lambda_floor_;
    if (!(x > 0.0)) {
        throw OutOfDomain("lambda not above the hazard floor");
    }
    const double yq = std::log(x);
    const double tau = grid_.maturity - t;

    const auto [i0, wy] = locate((yq + grid_.half_width) / grid_.h(), grid_.i_count - 1, 1e-9);
    const auto [j0, wt] = locate(tau / grid_.k(), grid_.j_count - 1, 1e-9);
    if (i0 < 0) {
        throw OutOfDomain("ln(lambda - floor) outside [-M, M]");
    }
    if (j0 < 0) {
        throw OutOfDomain("t outside [0, T]");
    }

    const auto interp = [&](auto&& node) {
        return (1.0 - wt) * ((1.0 - wy) * node(i0, j0) + wy * node(i0 + 1, j0)) +
               wt * ((1.0 - wy) * node(i0, j0 + 1) + wy * node(i0 + 1, j0 + 1));
    };

    const double value = interp([&](int i, int j) { return at(i, j); });

    // Central difference in y at interior nodes, one-sided at the edges.
    const double h = grid_.h();
    const auto dy = [&](int i, int j) {
        if (i == 0) return (at(1, j) - at(0, j)) / h;
        if (i == grid_.i_count) return (at(i, j) - at(i - 1, j)) / h;
        return (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
    };
    const double slope_y = interp(dy);

    return SurfacePoint{value, slope_y / x};
}

double price(const PriceSurface& surface, const MarketSpec& spec, double lambda, double t) {
    return std::exp(-spec.r * (spec.maturity - t)) * surface.value(lambda, t);
}

}  // namespace qfhedge
