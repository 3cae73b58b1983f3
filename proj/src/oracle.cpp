#include "scfw/oracle.hpp"

#include "scfw/barrier.hpp"
#include "scfw/eigensolver.hpp"

#include <algorithm>
#include <cmath>

namespace scfw {

void OracleConfig::validate() const {
  if (!(c > 2.0)) throw ConfigError("oracle: c must exceed 2");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("oracle: p must lie in (0, 1)");
}

double tau_for(double delta, double theta, double c) {
  if (!(delta >= 0.0)) throw ConfigError("tau_for: delta must be nonnegative");
  if (!(theta >= 1.0)) throw ConfigError("tau_for: theta must be >= 1");
  if (!(c > 2.0)) throw ConfigError("tau_for: c must exceed 2");
  return std::min(delta, (c - 2.0) * theta) / (c * theta);
}

double lanczos_rho_for(double delta, double theta, double c) {
  constexpr double kRhoFloor = 1e-12;
  const double rho = 8.0 * tau_for(delta, theta, c);
  return std::clamp(rho, kRhoFloor, 1.0);
}

int plmo_iterations(double delta, double theta, const OracleConfig& config, Index n) {
  return lanczos_iters_for(lanczos_rho_for(delta, theta, config.c), n, config.p);
}

namespace {

OracleOutput stay_output(const Vector& v, double theta, int iters) {
  OracleOutput out;
  out.w = v;
  out.g_approx = 0.0;
  out.lambda = theta;
  out.inner_iters = iters;
  return out;
}

OracleOutput from_direction(const Instance& inst, const Vector& v, Vector u, int iters) {
  OracleOutput out;
  out.w = apply_map_rank1(inst, u);
  out.g_approx = approx_gap(v, out.w);
  out.lambda = out.g_approx + static_cast<double>(inst.d());
  out.direction = std::move(u);
  out.inner_iters = iters;
  return out;
}

}  // namespace

OracleOutput plmo(const Instance& inst, const Vector& v, double delta, const OracleConfig& config, Rng& rng) {
  config.validate();
  require_interior(v, "plmo");
  if (!(delta >= 0.0)) throw ConfigError("plmo: delta must be nonnegative");
  const Index n = inst.n();
  if (delta == 0.0 && n <= config.dense_cap) return exact_lmo(inst, v, config.dense_cap);

  const double theta = static_cast<double>(inst.d());
  const int iters = plmo_iterations(delta, theta, config, n);
  GradientOperator op(inst, v);

  // Materialize J when the Krylov sweep would cost more through the A_i.
  const double steps = static_cast<double>(std::min<Index>(iters, n));
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const bool assemble = inst.has_dense_cache() && n <= config.dense_cap &&
                        static_cast<double>(inst.d()) * nn + 2.0 * steps * nn < steps * inst.matvec_cost();

  auto run = [&]() {
    if (assemble) {
      const Matrix j_mat = assemble_gradient_dense(op, config.dense_cap);
      auto apply = [&](const Vector& y) -> Vector { return j_mat * y; };
      return lanczos_max_eig(apply, n, iters, rng);
    }
    return lanczos_max_eig(op, n, iters, rng);
  };

  auto eig = run();
  int used = eig.iters;
  OracleOutput out = from_direction(inst, v, std::move(eig.u), used);
  if (out.g_approx < 0.0 && config.retry_on_negative) {
    eig = run();
    used += eig.iters;
    out = from_direction(inst, v, std::move(eig.u), used);
  }
  if (out.g_approx < 0.0) return stay_output(v, theta, used);
  return out;
}

OracleOutput exact_lmo(const Instance& inst, const Vector& v, Index cap) {
  require_interior(v, "exact_lmo");
  GradientOperator op(inst, v);
  EigResult<double> eig;
  if (inst.kind() == MatrixKind::kDiag) {
    // J is diagonal: the top eigenvector is the coordinate of its largest entry.
    const Vector j_diag = op.matvec(Vector::Ones(inst.n()));
    Index k = 0;
    eig.lambda = j_diag.maxCoeff(&k);
    eig.u = Vector::Unit(inst.n(), k);
    eig.iters = 1;
  } else {
    const Matrix j_mat = assemble_gradient_dense(op, cap);
    eig = dense_max_eig(j_mat, cap);
  }
  const double theta = static_cast<double>(inst.d());
  if (eig.lambda < theta * (1.0 - 1e-8))
    throw Error("exact_lmo: lambda_max(J) = " + std::to_string(eig.lambda) + " below theta = " +
                std::to_string(theta));
  OracleOutput out;
  out.w = apply_map_rank1(inst, eig.u);
  out.lambda = eig.lambda;
  out.g_approx = std::max(eig.lambda - theta, 0.0);
  out.direction = std::move(eig.u);
  out.inner_iters = eig.iters;
  return out;
}

Conditions classify_conditions(const OracleOutput& output, const OracleOutput& exact, double theta, double R_g,
                               double delta) {
  Conditions c;
  c.c1 = output.g_approx > theta + R_g;
  c.c2 = exact.g_approx - output.g_approx <= delta;
  return c;
}

FaultInjectingOracle::FaultInjectingOracle(std::unique_ptr<Oracle> inner, double q, Rng rng)
    : inner_(std::move(inner)), q_(q), rng_(std::move(rng)) {
  if (!inner_) throw ConfigError("fault injection: inner oracle is null");
  if (!(q_ >= 0.0 && q_ < 1.0)) throw ConfigError("fault injection: q must lie in [0, 1)");
}

OracleOutput FaultInjectingOracle::query(const Instance& inst, const Vector& v, double delta, Rng& rng) {
  ++calls_;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng_) >= q_) return inner_->query(inst, v, delta, rng);

  ++corrupted_;
  require_interior(v, "fault injection");
  OracleOutput out = from_direction(inst, v, random_unit_vector(inst.n(), rng_), 0);
  if (out.g_approx < 0.0) out = stay_output(v, static_cast<double>(inst.d()), 0);
  out.corrupted = true;
  return out;
}

std::unique_ptr<Oracle> fault_injecting_plmo(std::unique_ptr<Oracle> inner, double q, Rng rng) {
  return std::make_unique<FaultInjectingOracle>(std::move(inner), q, std::move(rng));
}

}  // namespace scfw
