#pragma once

#include <vector>

#include "invroot/matrix.hpp"

namespace invroot {

/// Eigenpairs of a symmetric matrix, eigenvalues ascending; column i of
/// `eigenvectors` belongs to `eigenvalues[i]`.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// tol * ||A||_F. Throws std::invalid_argument for asymmetric input.
EigenDecomposition jacobi_eigen(const Matrix& a, double tol = 1e-15);

/// V diag(lambda^(-1/p)) V^T. Throws NotSpdError if any eigenvalue <= 0.
Matrix reference_inv_proot(const Matrix& a, int p, double tol = 1e-15);

}  // namespace invroot
