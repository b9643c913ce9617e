#include "fanochain/dense.hpp"

#include "fanochain/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace fanochain {

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& v : data_)
        sum += std::norm(v);
    return std::sqrt(sum);
}

std::vector<std::complex<double>> ComplexMatrix::multiply(
    const std::vector<std::complex<double>>& x) const {
    std::vector<std::complex<double>> y(rows_, std::complex<double>(0.0, 0.0));
    for (std::size_t i = 0; i < rows_; ++i) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < cols_; ++j)
            acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

LinearSolveResult solve_full_pivot(ComplexMatrix A, std::vector<std::complex<double>> b) {
    const std::size_t n = A.rows();
    if (A.cols() != n || b.size() != n)
        throw InvalidModelError("solve_full_pivot requires a square system");

    const ComplexMatrix A0 = A;
    const std::vector<std::complex<double>> b0 = b;

    // col_perm[j] = original column index now sitting in column j.
    std::vector<std::size_t> col_perm(n);
    std::iota(col_perm.begin(), col_perm.end(), std::size_t{0});

    double pivot_max = 0.0;
    double pivot_min = std::numeric_limits<double>::infinity();

    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pi = step, pj = step;
        double best = -1.0;
        for (std::size_t i = step; i < n; ++i) {
            for (std::size_t j = step; j < n; ++j) {
                const double mag = std::abs(A(i, j));
                if (mag > best) {
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (best == 0.0) {
            std::ostringstream msg;
            msg << "singular system: zero pivot at elimination step " << step << " of " << n;
            throw SingularSystemError(msg.str());
        }

        if (pi != step) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(A(step, j), A(pi, j));
            std::swap(b[step], b[pi]);
        }
        if (pj != step) {
            for (std::size_t i = 0; i < n; ++i)
                std::swap(A(i, step), A(i, pj));
            std::swap(col_perm[step], col_perm[pj]);
        }

        const std::complex<double> pivot = A(step, step);
        pivot_max = std::max(pivot_max, std::abs(pivot));
        pivot_min = std::min(pivot_min, std::abs(pivot));

        for (std::size_t i = step + 1; i < n; ++i) {
            const std::complex<double> factor = A(i, step) / pivot;
            if (factor == std::complex<double>(0.0, 0.0))
                continue;
            A(i, step) = std::complex<double>(0.0, 0.0);
            for (std::size_t j = step + 1; j < n; ++j)
                A(i, j) -= factor * A(step, j);
            b[i] -= factor * b[step];
        }
    }

    // Back substitution in the permuted column order.
    std::vector<std::complex<double>> y(n);
    for (std::size_t ii = n; ii-- > 0;) {
        std::complex<double> acc = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j)
            acc -= A(ii, j) * y[j];
        y[ii] = acc / A(ii, ii);
    }

    LinearSolveResult result;
    result.x.assign(n, std::complex<double>(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j)
        result.x[col_perm[j]] = y[j];

    result.condition_estimate = pivot_max / pivot_min;

    const auto r = A0.multiply(result.x);
    double rsum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        rsum += std::norm(r[i] - b0[i]);
    result.residual_norm = std::sqrt(rsum);

    return result;
}

} // namespace fanochain
