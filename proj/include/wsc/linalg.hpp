#pragma once

#include "wsc/complex.hpp"

// Dense helpers shared by the Hodge and estimation modules. Rank decisions use
// a column-pivoted complete orthogonal decomposition: a pivot is dropped when
// it falls below rcond times the largest one.
namespace wsc::linalg {

/// Moore-Penrose pseudoinverse.
Matrix pseudo_inverse(const Matrix& a, double rcond = 1e-10);

/// Minimum-norm least-squares solution of a x = b.
Vector min_norm_solve(const Matrix& a, const Vector& b, double rcond = 1e-10);

/// Numerical rank.
Index numerical_rank(const Matrix& a, double rcond = 1e-10);

/// Orthonormal basis (Euclidean) of the column space of `a`.
Matrix orthonormal_range(const Matrix& a, double rcond = 1e-10);

/// Largest singular value, 0 for empty matrices.
double spectral_norm(const Matrix& a);

/// (a + a^T) / 2.
Matrix symmetric_part(const Matrix& a);

}  // namespace wsc::linalg
