#pragma once

#include "scfw/common.hpp"

#include <memory>
#include <string_view>
#include <vector>

namespace scfw {

enum class MatrixKind { kDiag, kDense, kFactors };

std::string_view to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(std::string_view text);

/// The data matrices A_1..A_d of the map B(X) = (<A_i, X>)_i.
///
/// Every A_i is symmetric PSD with positive trace. Storage depends on kind:
///   diag    - one n-vector per matrix (its diagonal)
///   dense   - the full symmetric n x n matrix
///   factors - an n x m_i matrix U_i with A_i = U_i U_i^T
/// Immutable after construction.
class Instance {
 public:
  /// Validates and takes ownership of the blocks. For diag, each block is n x 1.
  Instance(Index n, MatrixKind kind, std::vector<Matrix> blocks);

  Index n() const { return n_; }
  Index d() const { return static_cast<Index>(blocks_.size()); }
  MatrixKind kind() const { return kind_; }
  const Vector& traces() const { return traces_; }
  const Matrix& block(Index i) const { return blocks_[static_cast<std::size_t>(i)]; }

  /// A_i y.
  Vector apply(Index i, const Vector& y) const;
  /// y^T A_i y.
  double quad_form(Index i, const Vector& y) const;
  /// Dense copy of A_i.
  Matrix dense(Index i) const;

  /// True when an explicit n x n copy of every A_i is held (always for dense
  /// kind; for factors when it fits the cache budget).
  bool has_dense_cache() const { return kind_ == MatrixKind::kDense || !dense_cache_.empty(); }
  /// Rough flop count of one matvec with sum_i A_i / v_i.
  double matvec_cost() const;

  /// Factor instances cache dense products when d n^2 stays under this many doubles.
  static constexpr double kDenseCacheBudget = 2.5e7;

 private:
  Index n_;
  MatrixKind kind_;
  std::vector<Matrix> blocks_;
  std::vector<Matrix> dense_cache_;
  Vector traces_;
};

/// v = B(X), v_i = <A_i, X>. Sums are compensated when d n^2 > 1e6.
Vector apply_map(const Instance& inst, const Matrix& x);

/// w = B(u u^T), w_i = u^T A_i u.
Vector apply_map_rank1(const Instance& inst, const Vector& u);

/// J = -B*(grad f(v)) = sum_i A_i / v_i, available only through matvecs.
class GradientOperator {
 public:
  /// Throws DomainError unless every v_i > 0.
  GradientOperator(const Instance& inst, Vector v);

  const Instance& instance() const { return *inst_; }
  const Vector& v() const { return v_; }
  const Vector& weights() const { return weights_; }  // 1 / v_i

  Vector matvec(const Vector& y) const;
  Vector operator()(const Vector& y) const { return matvec(y); }

 private:
  const Instance* inst_;
  Vector v_;
  Vector weights_;
  Vector diag_;  // combined diagonal for diag-kind instances
};

Vector grad_op_matvec(const GradientOperator& op, const Vector& y);

/// Explicit J = sum_i A_i / v_i for small n (test oracle and exact LMO).
Matrix assemble_gradient_dense(const GradientOperator& op, Index cap = 2000);

/// Neumaier-compensated sum of the entrywise product of two equally sized blocks.
double compensated_inner(const Matrix& a, const Matrix& b);

}  // namespace scfw
