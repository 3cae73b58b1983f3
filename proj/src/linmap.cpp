#include "scfw/linmap.hpp"

#include "scfw/eigensolver.hpp"

#include <cmath>
#include <string>

namespace scfw {

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::kDiag:
      return "diag";
    case MatrixKind::kDense:
      return "dense";
    case MatrixKind::kFactors:
      return "factors";
  }
  return "?";
}

MatrixKind parse_matrix_kind(std::string_view text) {
  if (text == "diag") return MatrixKind::kDiag;
  if (text == "dense") return MatrixKind::kDense;
  if (text == "factors") return MatrixKind::kFactors;
  throw ConfigError("unknown matrix kind '" + std::string(text) + "' (expected diag, dense or factors)");
}

namespace {

// lambda_min(A) >= -1e-8 |A|_F, probed with Lanczos on |A|_F I - A.
void check_psd_dense(const Matrix& a, Index i) {
  const double fro = a.norm();
  if (fro == 0.0) return;
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * a.cwiseAbs().maxCoeff())
    throw DomainError("A_" + std::to_string(i + 1) + " is not symmetric");
  Rng rng(0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i));
  auto shifted = [&](const Vector& y) -> Vector { return fro * y - a * y; };
  const int iters = static_cast<int>(std::min<Index>(a.rows(), 100));
  const auto top = lanczos_max_eig(shifted, a.rows(), iters, rng);
  const double lambda_min = fro - top.lambda;
  if (lambda_min < -1e-8 * fro)
    throw DomainError("A_" + std::to_string(i + 1) + " is not PSD (smallest eigenvalue about " +
                      std::to_string(lambda_min) + ")");
}

}  // namespace

Instance::Instance(Index n, MatrixKind kind, std::vector<Matrix> blocks)
    : n_(n), kind_(kind), blocks_(std::move(blocks)) {
  if (n_ < 1) throw DimensionError("instance: n must be >= 1");
  if (blocks_.empty()) throw DimensionError("instance: d must be >= 1");
  const Index d = this->d();
  traces_.resize(d);
  for (Index i = 0; i < d; ++i) {
    const Matrix& b = blocks_[static_cast<std::size_t>(i)];
    const std::string name = "A_" + std::to_string(i + 1);
    switch (kind_) {
      case MatrixKind::kDiag:
        require_dims(b.rows() == n_ && b.cols() == 1, "instance: diag block must be n x 1");
        if ((b.array() < 0.0).any()) throw DomainError(name + " has a negative diagonal entry");
        traces_(i) = b.sum();
        break;
      case MatrixKind::kDense:
        require_dims(b.rows() == n_ && b.cols() == n_, "instance: dense block must be n x n");
        check_psd_dense(b, i);
        traces_(i) = b.trace();
        break;
      case MatrixKind::kFactors:
        require_dims(b.rows() == n_, "instance: factor block must have n rows");
        traces_(i) = b.squaredNorm();
        break;
    }
    if (!(traces_(i) > 0.0)) throw DomainError(name + " has nonpositive trace");
  }
  if (kind_ == MatrixKind::kFactors &&
      static_cast<double>(d) * static_cast<double>(n_) * static_cast<double>(n_) <= kDenseCacheBudget) {
    // Worth it only when the factors are not much thinner than n.
    Index total_cols = 0;
    for (const auto& b : blocks_) total_cols += b.cols();
    if (2 * total_cols >= d * n_) {
      dense_cache_.reserve(blocks_.size());
      for (const auto& b : blocks_) {
        Matrix a(n_, n_);
        a.setZero();
        a.selfadjointView<Eigen::Lower>().rankUpdate(b);
        a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
        dense_cache_.push_back(std::move(a));
      }
    }
  }
}

Vector Instance::apply(Index i, const Vector& y) const {
  require_dims(y.size() == n_, "apply: dimension mismatch");
  const Matrix& b = block(i);
  switch (kind_) {
    case MatrixKind::kDiag:
      return b.col(0).cwiseProduct(y);
    case MatrixKind::kDense:
      return b * y;
    case MatrixKind::kFactors:
      if (!dense_cache_.empty()) return dense_cache_[static_cast<std::size_t>(i)] * y;
      return b * (b.transpose() * y);
  }
  return {};
}

double Instance::quad_form(Index i, const Vector& y) const {
  require_dims(y.size() == n_, "quad_form: dimension mismatch");
  const Matrix& b = block(i);
  switch (kind_) {
    case MatrixKind::kDiag:
      return b.col(0).dot(y.cwiseAbs2());
    case MatrixKind::kDense:
      return y.dot(b * y);
    case MatrixKind::kFactors:
      return (b.transpose() * y).squaredNorm();
  }
  return 0.0;
}

Matrix Instance::dense(Index i) const {
  const Matrix& b = block(i);
  switch (kind_) {
    case MatrixKind::kDiag:
      return b.col(0).asDiagonal();
    case MatrixKind::kDense:
      return b;
    case MatrixKind::kFactors:
      if (!dense_cache_.empty()) return dense_cache_[static_cast<std::size_t>(i)];
      return b * b.transpose();
  }
  return {};
}

double Instance::matvec_cost() const {
  const double n = static_cast<double>(n_);
  const double d = static_cast<double>(this->d());
  switch (kind_) {
    case MatrixKind::kDiag:
      return n;
    case MatrixKind::kDense:
      return 2.0 * d * n * n;
    case MatrixKind::kFactors: {
      if (!dense_cache_.empty()) return 2.0 * d * n * n;
      double cols = 0.0;
      for (const auto& b : blocks_) cols += static_cast<double>(b.cols());
      return 4.0 * n * cols;
    }
  }
  return 0.0;
}

double compensated_inner(const Matrix& a, const Matrix& b) {
  require_dims(a.rows() == b.rows() && a.cols() == b.cols(), "compensated_inner: shape mismatch");
  double sum = 0.0;
  double comp = 0.0;
  const Index total = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  for (Index k = 0; k < total; ++k) {
    const double term = pa[k] * pb[k];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

Vector apply_map(const Instance& inst, const Matrix& x) {
  const Index n = inst.n();
  require_dims(x.rows() == n && x.cols() == n, "apply_map: X must be n x n");
  const Index d = inst.d();
  const bool compensate = static_cast<double>(d) * static_cast<double>(n) * static_cast<double>(n) > 1e6;
  Vector v(d);
  for (Index i = 0; i < d; ++i) {
    const Matrix& b = inst.block(i);
    switch (inst.kind()) {
      case MatrixKind::kDiag: {
        const Matrix diag = x.diagonal();
        v(i) = compensate ? compensated_inner(b, diag) : b.col(0).dot(x.diagonal());
        break;
      }
      case MatrixKind::kDense:
        v(i) = compensate ? compensated_inner(b, x) : b.cwiseProduct(x).sum();
        break;
      case MatrixKind::kFactors: {
        const Matrix xu = x * b;
        v(i) = compensate ? compensated_inner(b, xu) : b.cwiseProduct(xu).sum();
        break;
      }
    }
  }
  return v;
}

Vector apply_map_rank1(const Instance& inst, const Vector& u) {
  require_dims(u.size() == inst.n(), "apply_map_rank1: dimension mismatch");
  Vector w(inst.d());
  for (Index i = 0; i < inst.d(); ++i) w(i) = inst.quad_form(i, u);
  return w;
}

GradientOperator::GradientOperator(const Instance& inst, Vector v) : inst_(&inst), v_(std::move(v)) {
  require_dims(v_.size() == inst.d(), "GradientOperator: v must have length d");
  for (Index i = 0; i < v_.size(); ++i)
    if (!(v_(i) >= 1e-300))
      throw DomainError("GradientOperator: v_" + std::to_string(i + 1) + " = " + std::to_string(v_(i)) +
                        " is not positive");
  weights_ = v_.cwiseInverse();
  if (inst.kind() == MatrixKind::kDiag) {
    diag_ = Vector::Zero(inst.n());
    for (Index i = 0; i < inst.d(); ++i) diag_ += weights_(i) * inst.block(i).col(0);
  }
}

Vector GradientOperator::matvec(const Vector& y) const {
  require_dims(y.size() == inst_->n(), "grad_op_matvec: dimension mismatch");
  if (inst_->kind() == MatrixKind::kDiag) return diag_.cwiseProduct(y);
  Vector out = Vector::Zero(inst_->n());
  for (Index i = 0; i < inst_->d(); ++i) out.noalias() += weights_(i) * inst_->apply(i, y);
  return out;
}

Vector grad_op_matvec(const GradientOperator& op, const Vector& y) { return op.matvec(y); }

Matrix assemble_gradient_dense(const GradientOperator& op, Index cap) {
  const Instance& inst = op.instance();
  const Index n = inst.n();
  if (n > cap) throw CapacityError("assemble_gradient_dense: n exceeds cap " + std::to_string(cap));
  Matrix j_mat = Matrix::Zero(n, n);
  for (Index i = 0; i < inst.d(); ++i) {
    const double wt = op.weights()(i);
    switch (inst.kind()) {
      case MatrixKind::kDiag:
        j_mat.diagonal() += wt * inst.block(i).col(0);
        break;
      case MatrixKind::kDense:
        j_mat += wt * inst.block(i);
        break;
      case MatrixKind::kFactors:
        if (inst.has_dense_cache())
          j_mat += wt * inst.dense(i);
        else
          j_mat.selfadjointView<Eigen::Lower>().rankUpdate(inst.block(i), wt);
        break;
    }
  }
  if (inst.kind() == MatrixKind::kFactors && !inst.has_dense_cache())
    j_mat.triangularView<Eigen::StrictlyUpper>() = j_mat.transpose();
  return j_mat;
}

}  // namespace scfw
