#include <doctest.h>

#include <cmath>
#include <vector>

#include "qfhedge/errors.hpp"
#include "qfhedge/rng.hpp"
#include "qfhedge/tridiag.hpp"

using namespace qfhedge;

namespace {

// Dense Gaussian elimination with partial pivoting; the independent oracle
// for the Thomas recurrence.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t row = n; row-- > 0;) {
        double s = b[row];
        for (std::size_t k = row + 1; k < n; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return x;
}

}  // namespace

TEST_CASE("identity system returns the right-hand side") {
    const std::vector<double> diag{1.0, 1.0, 1.0};
    const std::vector<double> off{0.0, 0.0};
    const std::vector<double> rhs{1.0, 2.0, 3.0};
    const auto x = tridiagonal_solve(off, diag, off, rhs);
    CHECK(x == rhs);
}

TEST_CASE("2x2 system solved by hand") {
    const std::vector<double> sub{1.0};
    const std::vector<double> diag{2.0, 2.0};
    const std::vector<double> sup{1.0};
    const std::vector<double> rhs{3.0, 3.0};
    const auto x = tridiagonal_solve(sub, diag, sup, rhs);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("single-row system") {
    const auto x = tridiagonal_solve({}, std::vector<double>{4.0}, {},
                                     std::vector<double>{2.0});
    CHECK(x[0] == 0.5);
}

TEST_CASE("random diagonally dominant systems match the dense oracle") {
    CounterRng rng(42, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 50;
        std::vector<double> sub(n - 1), diag(n), sup(n - 1), rhs(n);
        for (std::size_t i = 0; i < n - 1; ++i) {
            sub[i] = 2.0 * rng.next_uniform() - 1.0;
            sup[i] = 2.0 * rng.next_uniform() - 1.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double row_sum = (i > 0 ? std::abs(sub[i - 1]) : 0.0) +
                                   (i + 1 < n ? std::abs(sup[i]) : 0.0);
            const double sign = rng.next_uniform() < 0.5 ? -1.0 : 1.0;
            diag[i] = sign * (row_sum + 0.5 + rng.next_uniform());
            rhs[i] = 4.0 * rng.next_uniform() - 2.0;
        }

        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            dense[i][i] = diag[i];
            if (i > 0) dense[i][i - 1] = sub[i - 1];
            if (i + 1 < n) dense[i][i + 1] = sup[i];
        }

        const auto x = tridiagonal_solve(sub, diag, sup, rhs);
        const auto expected = dense_solve(dense, rhs);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(x[i] - expected[i]) < 1e-10);
        }
    }
}

TEST_CASE("zero pivot is reported") {
    const std::vector<double> sub{1.0};
    const std::vector<double> diag{0.0, 1.0};
    const std::vector<double> sup{1.0};
    const std::vector<double> rhs{1.0, 1.0};
    CHECK_THROWS_AS(tridiagonal_solve(sub, diag, sup, rhs), ZeroPivot);

    // Elimination can also cancel the pivot on a later row.
    const std::vector<double> diag2{1.0, 1.0};
    CHECK_THROWS_AS(tridiagonal_solve(sub, diag2, sup, rhs), ZeroPivot);
}
