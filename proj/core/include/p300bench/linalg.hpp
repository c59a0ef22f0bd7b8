#pragma once

#include <vector>

#include "p300bench/matrix.hpp"

namespace p300 {

/// Biased (1/n) sample covariance of the rows of `x`.
///
/// With `assume_centered` the rows are used as-is (their mean is taken to be
/// zero); otherwise column means are subtracted first. Throws
/// "insufficient samples" when x has fewer than two rows.
Matrix covariance(const Matrix& x, bool assume_centered = false);

std::vector<double> column_means(const Matrix& x);

struct EigenDecomposition {
    std::vector<double> values;  ///< descending
    Matrix vectors;              ///< column i pairs with values[i]
    int sweeps = 0;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius norm drops below
/// 1e-12 * ||A||_F; gives up after 100 sweeps. Each eigenvector is signed so
/// that its largest-magnitude component is positive.
EigenDecomposition sym_eig(const Matrix& a);

}  // namespace p300
