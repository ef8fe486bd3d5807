#include "qfhedge/tridiag.hpp"

#include <cassert>
#include <cmath>

#include "qfhedge/errors.hpp"

namespace qfhedge {

void tridiagonal_solve(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::span<const double> rhs,
                       std::span<double> x, std::span<double> scratch) {
    const std::size_t n = diag.size();
    assert(n >= 1);
    assert(sub.size() == n - 1 && super.size() == n - 1);
    assert(rhs.size() == n && x.size() >= n && scratch.size() >= n);

    constexpr double pivot_floor = 1e-14;

    // Forward elimination: scratch holds the normalized super-diagonal,
    // x temporarily holds the transformed right-hand side.
    double pivot = diag[0];
    if (std::abs(pivot) < pivot_floor) {
        throw ZeroPivot("tridiagonal pivot underflow at row 0");
    }
    scratch[0] = (n > 1) ? super[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - sub[i - 1] * scratch[i - 1];
        if (std::abs(pivot) < pivot_floor) {
            throw ZeroPivot("tridiagonal pivot underflow at row " + std::to_string(i));
        }
        scratch[i] = (i + 1 < n) ? super[i] / pivot : 0.0;
        x[i] = (rhs[i] - sub[i - 1] * x[i - 1]) / pivot;
    }

    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= scratch[i] * x[i + 1];
    }
}

std::vector<double> tridiagonal_solve(std::span<const double> sub,
                                      std::span<const double> diag,
                                      std::span<const double> super,
                                      std::span<const double> rhs) {
    std::vector<double> x(diag.size());
    std::vector<double> scratch(diag.size());
    tridiagonal_solve(sub, diag, super, rhs, x, scratch);
    return x;
}

}  // namespace qfhedge
