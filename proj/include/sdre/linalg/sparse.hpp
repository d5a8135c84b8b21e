#pragma once

#include <array>

#include "sdre/types.hpp"

namespace sdre {

enum class BoundaryKind { Dirichlet, Neumann };

SparseMatrix sparse_identity(Index n);
SparseMatrix sparse_diag(const Vector& d);

/// tridiag([a b c], n): b on the main diagonal, a below, c above.
SparseMatrix sparse_tridiag(std::array<double, 3> stencil, Index n);

SparseMatrix sparse_kron(const SparseMatrix& A, const SparseMatrix& B);

/// 1D second-difference operator T/h² over all n grid nodes. Dirichlet keeps the
/// truncated stencil at the boundary rows; Neumann uses the flux form (diagonal
/// −1 at the ends) so the matrix stays symmetric with zero row sums.
SparseMatrix laplacian_1d(Index n, double h, BoundaryKind bc);

/// Tensorized 2D grid operator on n1×n2 nodes, lexicographic with axis 1 fastest.
/// A [a,-2a,a] stencil yields (I⊗T + T⊗I)/h²; the backward-difference stencil
/// [-1,1,0] yields the gradient operator −(I⊗B + B⊗I)/h (Dirichlet only).
SparseMatrix kron_tridiag_2d(Index n1, Index n2, std::array<double, 3> stencil,
                             double h, BoundaryKind bc);

/// Sparse × dense block product with dimension checking.
DenseMatrix spmv(const SparseMatrix& A, const DenseMatrix& X);

bool is_symmetric(const SparseMatrix& A, double tol = 1e-12);

}  // namespace sdre
