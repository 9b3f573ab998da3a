#ifndef CLUSTERDIAG_LINALG_HPP
#define CLUSTERDIAG_LINALG_HPP

#include <vector>

#include "clusterdiag/matrix.hpp"

/**
 * @file linalg.hpp
 * @brief Covariance, Cholesky and symmetric eigen-decomposition for small dense matrices.
 */

namespace clusterdiag {

/// Population covariance `X^T X / n` of an already-centered matrix. Requires `n >= 2`.
Matrix covariance(const Matrix& centered);

/// Column means of `X`.
std::vector<double> column_means(const Matrix& x);

/**
 * Lower-triangular `L` with `L L^T = S`.
 * Throws `NumericFailure` (with `index()` = failing pivot) when `S` is not positive definite,
 * and `InvalidArgument` when `S` is not square or not symmetric within 1e-9.
 */
Matrix cholesky(const Matrix& s);

struct SymEigen {
    std::vector<double> values; ///< descending
    Matrix vectors;             ///< column j pairs with values[j]
};

struct JacobiSettings {
    double off_diagonal_tolerance = 1e-12;
    int max_sweeps = 100;
};

/**
 * Cyclic Jacobi eigen-decomposition of a symmetric matrix.
 *
 * Eigenvalues are sorted in descending order (stable for ties). Each eigenvector is flipped so its
 * largest-magnitude entry is positive; among entries of equal magnitude the lowest index decides.
 * The off-diagonal threshold is relative to the Frobenius norm of the input.
 * Throws `InvalidArgument` for non-square input or asymmetry above 1e-9.
 */
SymEigen sym_eigen(const Matrix& s, const JacobiSettings& settings = {});

}

#endif
