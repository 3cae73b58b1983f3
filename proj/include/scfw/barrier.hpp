#pragma once

// Calculus of the separable log barrier f(v) = -sum_i log v_i, evaluated in
// the d-dimensional barrier coordinates v = B(X) and w = B(H).

#include "scfw/common.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace scfw {

class Instance;

/// Parameters of a 2-self-concordant, theta-logarithmically-homogeneous barrier
/// plus the variation R_g of the nonsmooth part.
struct BarrierParams {
  double theta{1.0};
  double M{2.0};
  double R_g{0.0};
  /// Factor applied to objective values (and to the target accuracy) after
  /// standardization to M = 2.
  double scale{1.0};

  /// theta + R_g, the large-gap threshold.
  double gap_threshold() const { return theta + R_g; }
  void validate() const;
};

/// Standard parameters for f(v) = -sum log v_i with d terms over the spectrahedron.
inline BarrierParams log_barrier_params(Index d) { return BarrierParams{static_cast<double>(d), 2.0, 0.0, 1.0}; }

/// -a - log(1 - a) for a < 1, +inf otherwise.
template <typename Scalar>
Scalar omega(Scalar a) {
  if (!(a < Scalar(1))) return std::numeric_limits<Scalar>::infinity();
  return -a - std::log1p(-a);
}

/// a - log(1 + a) for a > -1, +inf otherwise.
template <typename Scalar>
Scalar omega_star(Scalar a) {
  if (!(a > Scalar(-1))) return std::numeric_limits<Scalar>::infinity();
  return a - std::log1p(a);
}

/// Smallest coordinate treated as interior.
inline constexpr double kInteriorFloor = 1e-300;

template <typename Derived>
void require_interior(const Eigen::MatrixBase<Derived>& v, const char* who) {
  for (Index i = 0; i < v.size(); ++i)
    if (!(v(i) >= kInteriorFloor))
      throw DomainError(std::string(who) + ": coordinate " + std::to_string(i + 1) + " = " +
                        std::to_string(static_cast<double>(v(i))) + " is outside the barrier domain");
}

/// f(v) = -sum_i log v_i.
template <typename Derived>
typename Derived::Scalar f_value(const Eigen::MatrixBase<Derived>& v) {
  require_interior(v, "f_value");
  return -v.array().log().sum();
}

/// grad f(v) = -1/v.
template <typename Derived>
auto f_gradient(const Eigen::MatrixBase<Derived>& v) {
  return (-v.array().inverse()).matrix();
}

/// Approximate duality gap <v - w, grad f(v)> = sum_i (w_i / v_i - 1).
template <typename DerivedV, typename DerivedW>
typename DerivedV::Scalar approx_gap(const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedW>& w) {
  require_dims(v.size() == w.size(), "approx_gap: length mismatch");
  return (w.array() / v.array() - 1.0).sum();
}

/// Hessian seminorm distance ||w - v||_v = sqrt(sum_i ((w_i - v_i) / v_i)^2).
template <typename DerivedV, typename DerivedW>
typename DerivedV::Scalar hessian_distance(const Eigen::MatrixBase<DerivedV>& v,
                                           const Eigen::MatrixBase<DerivedW>& w) {
  require_dims(v.size() == w.size(), "hessian_distance: length mismatch");
  return ((w.array() - v.array()) / v.array()).matrix().norm();
}

/// Standardizes an M-self-concordant, theta_bar-homogeneous barrier: returns
/// theta = (M^2/4) theta_bar, M = 2 and the scale M^2/4 callers apply to
/// objective values and to epsilon. Throws if the scaled theta drops below 1.
BarrierParams rescale_to_standard(double theta_bar, double M);

/// Bounds on the initial optimality gap at X0 = I/n.
struct InitialGapBound {
  double bound{0};        // d log n
  double f_initial{0};    // f(B(I/n))
  double dual_lower{0};   // -sum_i log Tr(A_i) <= f*
};

InitialGapBound initial_gap_bound(const Instance& inst);

}  // namespace scfw
