#pragma once

#include "scfw/common.hpp"
#include "scfw/symmetric_eigen.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace scfw {

inline constexpr Index kDenseCap = 2000;

template <typename Scalar>
struct EigResult {
  Scalar lambda{0};    // u^T J u, recomputed from the returned vector
  VectorX<Scalar> u;   // unit norm
  int iters{0};        // Krylov dimension actually built
  bool breakdown{false};
};

/// Lanczos iteration count that reaches u^T J u >= lambda_max - (rho/8)|J|
/// with probability 1 - p from a uniformly random start:
/// ceil(1/2 + log(4n/p^2) / sqrt(rho)).
int lanczos_iters_for(double rho, Index n, double p);

/// Largest eigenpair of a symmetric PSD operator given only by its matvec.
///
/// Builds a Krylov basis from a uniformly random unit start vector with full
/// reorthogonalization, for min(num_iters, n) steps or until the residual
/// collapses below 1e-13 |J| (flagged as breakdown), and returns the top
/// Ritz pair.
template <typename Scalar = double, typename MatVec>
EigResult<Scalar> lanczos_max_eig(MatVec&& apply, Index n, int num_iters, Rng& rng) {
  using Vec = VectorX<Scalar>;
  using Mat = MatrixX<Scalar>;
  if (num_iters < 1) throw ConfigError("lanczos_max_eig: num_iters must be >= 1");
  require_dims(n >= 1, "lanczos_max_eig: empty operator");

  const Index k_max = std::min<Index>(num_iters, n);
  // Grown on demand so an early breakdown keeps the workspace small.
  Mat basis(n, std::min<Index>(k_max, 8));
  Vec alpha(k_max), beta(k_max);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec q(n);
  do {
    for (Index i = 0; i < n; ++i) q(i) = Scalar(normal(rng));
  } while (q.norm() == Scalar(0));
  q.normalize();

  EigResult<Scalar> res;
  Scalar norm_est = 0;
  Index k = 0;
  Vec w(n);
  for (Index j = 0; j < k_max; ++j) {
    if (j == basis.cols()) basis.conservativeResize(Eigen::NoChange, std::min<Index>(2 * j, k_max));
    basis.col(j) = q;
    w = apply(q);
    alpha(j) = q.dot(w);
    w -= alpha(j) * q;
    if (j > 0) w -= beta(j - 1) * basis.col(j - 1);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const auto active = basis.leftCols(j + 1);
      w.noalias() -= active * (active.transpose() * w);
    }
    beta(j) = w.norm();
    norm_est = std::max(norm_est, std::abs(alpha(j)) + beta(j) + (j > 0 ? beta(j - 1) : Scalar(0)));
    k = j + 1;
    if (k == k_max) break;
    if (beta(j) == Scalar(0) || beta(j) < Scalar(1e-13) * norm_est) {
      res.breakdown = true;
      break;
    }
    q = w / beta(j);
  }

  Vec diag = alpha.head(k);
  Vec sub = Vec::Zero(k);
  for (Index i = 1; i < k; ++i) sub(i) = beta(i - 1);
  Mat ritz = Mat::Identity(k, k);
  tridiagonal_ql(diag, sub, ritz);

  res.u = basis.leftCols(k) * ritz.col(k - 1);
  res.u.normalize();
  res.lambda = res.u.dot(apply(res.u));
  res.iters = static_cast<int>(k);
  return res;
}

/// Exact largest eigenpair via the in-repo dense solver. The eigenvector's
/// largest-magnitude entry is made positive.
template <typename Derived>
EigResult<typename Derived::Scalar> dense_max_eig(const Eigen::MatrixBase<Derived>& j_mat,
                                                  Index cap = kDenseCap) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  require_dims(j_mat.rows() == j_mat.cols(), "dense_max_eig: matrix must be square");
  const Index n = j_mat.rows();
  if (n > cap) throw CapacityError("dense_max_eig: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  require_dims(n >= 1, "dense_max_eig: empty matrix");
  const Scalar scale = j_mat.cwiseAbs().maxCoeff();
  const Scalar asym = (j_mat - j_mat.transpose()).cwiseAbs().maxCoeff();
  if (asym > Scalar(1e-12) * std::max(scale, Scalar(1)))
    throw DimensionError("dense_max_eig: input is not symmetric");

  auto eig = symmetric_eigen(j_mat);
  EigResult<Scalar> res;
  res.u = eig.vectors.col(n - 1);
  Index imax = 0;
  res.u.cwiseAbs().maxCoeff(&imax);
  if (res.u(imax) < 0) res.u = -res.u;
  res.u.normalize();
  res.lambda = res.u.dot(j_mat * res.u);
  res.iters = static_cast<int>(n);
  return res;
}

}  // namespace scfw
