#include "sdre/krylov/low_rank.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace sdre {

double LowRankSym::norm_fro() const {
  if (rank() == 0) return 0.0;
  DenseMatrix G = Z.transpose() * Z;
  DenseMatrix YG = Y * G;
  return std::sqrt(std::max(0.0, (YG * YG).trace()));
}

LowRankSym LowRankSym::truncated(double rel_tol) const {
  if (rank() == 0) return *this;
  // fold any non-orthonormality of Z into the core
  DenseMatrix G = Z.transpose() * Z;
  const bool orthonormal =
      (G - DenseMatrix::Identity(rank(), rank())).cwiseAbs().maxCoeff() < 1e-10;
  DenseMatrix Zo = Z, core = Y;
  if (!orthonormal) {
    Eigen::HouseholderQR<DenseMatrix> qr(Z);
    DenseMatrix R = qr.matrixQR().topRows(rank()).triangularView<Eigen::Upper>();
    Zo = qr.householderQ() * DenseMatrix::Identity(dim(), rank());
    core = R * Y * R.transpose();
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (core + core.transpose()));
  const Vector& ev = es.eigenvalues();
  const double cutoff = rel_tol * ev.cwiseAbs().maxCoeff();
  std::vector<Index> keep;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) > cutoff) keep.push_back(i);
  LowRankSym out;
  out.Z.resize(dim(), static_cast<Index>(keep.size()));
  out.Y = DenseMatrix::Zero(static_cast<Index>(keep.size()), static_cast<Index>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) {
    out.Z.col(static_cast<Index>(j)) = Zo * es.eigenvectors().col(keep[j]);
    out.Y(static_cast<Index>(j), static_cast<Index>(j)) = ev[keep[j]];
  }
  return out;
}

}  // namespace sdre
