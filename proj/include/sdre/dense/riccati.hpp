#pragma once

#include "sdre/types.hpp"

namespace sdre {

/// Stabilizing solution of AᵀX + XA − XSX + Q = 0 through the stable invariant
/// subspace of the Hamiltonian [[A, −S], [−Q, −Aᵀ]] (ordered real Schur form).
/// S and Q must be symmetric; S may be indefinite (H∞ synthesis). Throws when
/// no stabilizing solution exists, which in H∞ usage signals γ below γ*.
DenseMatrix solve_dense_riccati(const DenseMatrix& A, const DenseMatrix& S,
                                const DenseMatrix& Q);

/// ‖AᵀX + XA − XSX + Q‖_F
double riccati_residual(const DenseMatrix& A, const DenseMatrix& S,
                        const DenseMatrix& X, const DenseMatrix& Q);

}  // namespace sdre
