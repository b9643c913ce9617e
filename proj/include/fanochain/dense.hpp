#ifndef FANOCHAIN_DENSE_HPP
#define FANOCHAIN_DENSE_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace fanochain {

// Row-major dense complex matrix, sized for the small boundary-matched
// scattering systems (a dozen-odd unknowns).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, std::complex<double>(0.0, 0.0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    double frobenius_norm() const;
    std::vector<std::complex<double>> multiply(const std::vector<std::complex<double>>& x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::complex<double>> data_;
};

struct LinearSolveResult {
    std::vector<std::complex<double>> x;
    double condition_estimate = 0.0; // |pivot|_max / |pivot|_min from the elimination
    double residual_norm = 0.0;      // ||A x - b||_2 against the original system
};

// Gaussian elimination with full (row and column) pivoting. Deterministic,
// no blocking, no iterative refinement. Throws SingularSystemError on an
// exactly zero pivot.
LinearSolveResult solve_full_pivot(ComplexMatrix A, std::vector<std::complex<double>> b);

} // namespace fanochain

#endif
