#pragma once

#include <span>
#include <vector>

namespace qfhedge {

/// Solves the tridiagonal system M x = rhs with the Thomas recurrence.
/// `diag` has length n >= 1, `sub` and `super` length n - 1. `x` receives the
/// solution and `scratch` must provide at least n doubles of workspace.
/// Throws ZeroPivot if a pivot magnitude falls below 1e-14.
void tridiagonal_solve(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::span<const double> rhs,
                       std::span<double> x, std::span<double> scratch);

/// Allocating convenience overload.
std::vector<double> tridiagonal_solve(std::span<const double> sub,
                                      std::span<const double> diag,
                                      std::span<const double> super,
                                      std::span<const double> rhs);

}  // namespace qfhedge
