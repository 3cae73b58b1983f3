#pragma once

#include "scfw/common.hpp"
#include "scfw/linmap.hpp"

#include <memory>
#include <optional>
#include <string>

namespace scfw {

/// One answer of a linear-minimization oracle at the iterate with barrier
/// coordinates v. The returned point is either the rank-one H = u u^T or the
/// current iterate itself ("stay").
struct OracleOutput {
  std::optional<Vector> direction;  // unit u, or empty for stay
  Vector w;                          // B(H); equals v when staying
  double g_approx{0};                // G^a >= 0
  double lambda{0};                  // u^T J u = -F^lin(H)
  int inner_iters{0};
  bool corrupted{false};  // produced by fault injection
  std::optional<bool> cond_c1;
  std::optional<bool> cond_c2;

  bool stay() const { return !direction.has_value(); }
};

struct OracleConfig {
  double c{4.0};   // relative-error constant, > 2
  double p{0.1};   // per-call failure probability
  /// Rerun Lanczos once before falling back to stay when G^a < 0.
  bool retry_on_negative{false};
  Index dense_cap{2000};

  void validate() const;
};

/// min(delta, (c - 2) theta) / (c theta).
double tau_for(double delta, double theta, double c);

/// rho = 8 tau clipped into (0, 1]; delta = 0 maps to the 1e-12 floor.
double lanczos_rho_for(double delta, double theta, double c);

/// Lanczos iteration count the probabilistic oracle uses for this delta.
int plmo_iterations(double delta, double theta, const OracleConfig& config, Index n);

/// Probabilistic LMO over the spectrahedron: Lanczos on J = sum_i A_i / v_i
/// with the iteration count above, G^a = sum_i (w_i / v_i - 1), and the
/// stay repair when G^a < 0. delta = 0 falls through to exact_lmo when n is
/// within the dense cap.
OracleOutput plmo(const Instance& inst, const Vector& v, double delta, const OracleConfig& config, Rng& rng);

/// Exact LMO: dense top eigenpair of J. g_approx is the exact gap
/// lambda_max(J) - theta; F^lin(h*) = -lambda.
OracleOutput exact_lmo(const Instance& inst, const Vector& v, Index cap = 2000);

struct Conditions {
  bool c1{false};  // large gap: G^a > theta + R_g
  bool c2{false};  // delta-suboptimal: G - G^a <= delta
};

Conditions classify_conditions(const OracleOutput& output, const OracleOutput& exact, double theta, double R_g,
                               double delta);

/// Oracle interface the solver drives. `rng` is the caller's oracle stream.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual OracleOutput query(const Instance& inst, const Vector& v, double delta, Rng& rng) = 0;
  virtual std::string name() const = 0;
};

class LanczosOracle final : public Oracle {
 public:
  explicit LanczosOracle(OracleConfig config) : config_(config) { config_.validate(); }
  OracleOutput query(const Instance& inst, const Vector& v, double delta, Rng& rng) override {
    return plmo(inst, v, delta, config_, rng);
  }
  std::string name() const override { return "lanczos"; }
  const OracleConfig& config() const { return config_; }

 private:
  OracleConfig config_;
};

class ExactOracle final : public Oracle {
 public:
  explicit ExactOracle(Index cap = 2000) : cap_(cap) {}
  OracleOutput query(const Instance& inst, const Vector& v, double, Rng&) override {
    return exact_lmo(inst, v, cap_);
  }
  std::string name() const override { return "exact"; }

 private:
  Index cap_;
};

/// With probability q per call, replaces the inner answer by a uniformly
/// random unit direction with its honestly computed G^a (stay if negative).
/// Draws come from its own stream, so q = 0 delegates bit for bit.
class FaultInjectingOracle final : public Oracle {
 public:
  FaultInjectingOracle(std::unique_ptr<Oracle> inner, double q, Rng rng);
  OracleOutput query(const Instance& inst, const Vector& v, double delta, Rng& rng) override;
  std::string name() const override { return "fault_injected(" + inner_->name() + ")"; }

  std::size_t calls() const { return calls_; }
  std::size_t corrupted() const { return corrupted_; }

 private:
  std::unique_ptr<Oracle> inner_;
  double q_;
  Rng rng_;
  std::size_t calls_{0};
  std::size_t corrupted_{0};
};

std::unique_ptr<Oracle> fault_injecting_plmo(std::unique_ptr<Oracle> inner, double q, Rng rng);

}  // namespace scfw
