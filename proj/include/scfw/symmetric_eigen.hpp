#pragma once

// Dense symmetric eigendecomposition: Householder reduction to tridiagonal
// form followed by the implicit-shift QL iteration (EISPACK tred2/tql2).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scfw {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Implicit QL on a symmetric tridiagonal matrix.
///
/// On entry `diag` holds the diagonal and `sub(i)` the entry at (i, i-1) for
/// i >= 1 (`sub(0)` is ignored). `vectors` must hold the transformation that
/// produced the tridiagonal form (identity if the input already was one).
/// On exit `diag` holds eigenvalues in ascending order and the columns of
/// `vectors` the matching orthonormal eigenvectors.
template <typename Scalar>
void tridiagonal_ql(VectorX<Scalar>& diag, VectorX<Scalar>& sub, MatrixX<Scalar>& vectors) {
  using std::abs;
  using std::hypot;
  const Eigen::Index n = diag.size();
  if (n == 0) return;
  for (Eigen::Index i = 1; i < n; ++i) sub(i - 1) = sub(i);
  sub(n - 1) = 0;

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar f = 0;
  Scalar tst1 = 0;
  constexpr int kMaxSweeps = 64;

  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, abs(diag(l)) + abs(sub(l)));
    Eigen::Index m = l;
    while (m < n - 1 && abs(sub(m)) > eps * tst1) ++m;

    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > kMaxSweeps) throw std::runtime_error("tridiagonal_ql: no convergence");
        Scalar g = diag(l);
        Scalar p = (diag(l + 1) - g) / (2 * sub(l));
        Scalar r = hypot(p, Scalar(1));
        if (p < 0) r = -r;
        diag(l) = sub(l) / (p + r);
        diag(l + 1) = sub(l) * (p + r);
        const Scalar dl1 = diag(l + 1);
        Scalar h = g - diag(l);
        for (Eigen::Index i = l + 2; i < n; ++i) diag(i) -= h;
        f += h;

        p = diag(m);
        Scalar c = 1, c2 = 1, c3 = 1;
        const Scalar el1 = sub(l + 1);
        Scalar s = 0, s2 = 0;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * sub(i);
          h = c * p;
          r = hypot(p, sub(i));
          sub(i + 1) = s * r;
          s = sub(i) / r;
          c = p / r;
          p = c * diag(i) - s * g;
          diag(i + 1) = h + s * (c * g + s * diag(i));
          // Apply the plane rotation to columns i and i+1.
          for (Eigen::Index k = 0; k < vectors.rows(); ++k) {
            h = vectors(k, i + 1);
            vectors(k, i + 1) = s * vectors(k, i) + c * h;
            vectors(k, i) = c * vectors(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * sub(l) / dl1;
        sub(l) = s * p;
        diag(l) = c * p;
      } while (abs(sub(l)) > eps * tst1);
    }
    diag(l) += f;
    sub(l) = 0;
  }

  // Selection sort keeps the column swaps cheap relative to the QL sweeps.
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    Eigen::Index k = i;
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (diag(j) < diag(k)) k = j;
    if (k != i) {
      std::swap(diag(k), diag(i));
      vectors.col(i).swap(vectors.col(k));
    }
  }
}

/// Householder tridiagonalization. On entry `v` is the symmetric input; on
/// exit it holds the orthogonal transformation Q, `diag`/`sub` the
/// tridiagonal entries in the layout `tridiagonal_ql` expects.
template <typename Scalar>
void householder_tridiagonalize(MatrixX<Scalar>& v, VectorX<Scalar>& diag, VectorX<Scalar>& sub) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index n = v.rows();
  diag.resize(n);
  sub.resize(n);
  if (n == 0) return;
  for (Eigen::Index j = 0; j < n; ++j) diag(j) = v(n - 1, j);

  for (Eigen::Index i = n - 1; i > 0; --i) {
    Scalar scale = 0;
    Scalar h = 0;
    for (Eigen::Index k = 0; k < i; ++k) scale += abs(diag(k));
    if (scale == 0) {
      sub(i) = diag(i - 1);
      for (Eigen::Index j = 0; j < i; ++j) {
        diag(j) = v(i - 1, j);
        v(i, j) = 0;
        v(j, i) = 0;
      }
    } else {
      for (Eigen::Index k = 0; k < i; ++k) {
        diag(k) /= scale;
        h += diag(k) * diag(k);
      }
      Scalar f = diag(i - 1);
      Scalar g = sqrt(h);
      if (f > 0) g = -g;
      sub(i) = scale * g;
      h -= f * g;
      diag(i - 1) = f - g;
      for (Eigen::Index j = 0; j < i; ++j) sub(j) = 0;

      for (Eigen::Index j = 0; j < i; ++j) {
        f = diag(j);
        v(j, i) = f;
        g = sub(j) + v(j, j) * f;
        for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * diag(k);
          sub(k) += v(k, j) * f;
        }
        sub(j) = g;
      }
      f = 0;
      for (Eigen::Index j = 0; j < i; ++j) {
        sub(j) /= h;
        f += sub(j) * diag(j);
      }
      const Scalar hh = f / (h + h);
      for (Eigen::Index j = 0; j < i; ++j) sub(j) -= hh * diag(j);
      for (Eigen::Index j = 0; j < i; ++j) {
        f = diag(j);
        g = sub(j);
        for (Eigen::Index k = j; k <= i - 1; ++k) v(k, j) -= (f * sub(k) + g * diag(k));
        diag(j) = v(i - 1, j);
        v(i, j) = 0;
      }
    }
    diag(i) = h;
  }

  // Accumulate the transformations.
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1;
    const Scalar h = diag(i + 1);
    if (h != 0) {
      for (Eigen::Index k = 0; k <= i; ++k) diag(k) = v(k, i + 1) / h;
      for (Eigen::Index j = 0; j <= i; ++j) {
        Scalar g = 0;
        for (Eigen::Index k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (Eigen::Index k = 0; k <= i; ++k) v(k, j) -= g * diag(k);
      }
    }
    for (Eigen::Index k = 0; k <= i; ++k) v(k, i + 1) = 0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    diag(j) = v(n - 1, j);
    v(n - 1, j) = 0;
  }
  v(n - 1, n - 1) = 1;
  sub(0) = 0;
}

template <typename Scalar>
struct SymmetricEigen {
  VectorX<Scalar> values;   // ascending
  MatrixX<Scalar> vectors;  // columns match `values`
};

/// Full eigendecomposition of a symmetric matrix (only the lower triangle
/// is trusted; the input is symmetrized from it).
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> symmetric_eigen(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  SymmetricEigen<Scalar> out;
  out.vectors = a.template selfadjointView<Eigen::Lower>();
  VectorX<Scalar> sub;
  householder_tridiagonalize(out.vectors, out.values, sub);
  tridiagonal_ql(out.values, sub, out.vectors);
  return out;
}

}  // namespace scfw
