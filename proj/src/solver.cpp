#include "scfw/solver.hpp"

#include "scfw/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace scfw {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kApproxI:
      return "approxI";
    case Variant::kApproxII:
      return "approxII";
    case Variant::kExact:
      return "exact";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "approxI") return Variant::kApproxI;
  if (text == "approxII") return Variant::kApproxII;
  if (text == "exact") return Variant::kExact;
  throw ConfigError("unknown variant '" + std::string(text) + "' (expected approxI, approxII or exact)");
}

std::string_view to_string(IterateMode m) { return m == IterateMode::kMatrix ? "matrix" : "sampling"; }

IterateMode parse_mode(std::string_view text) {
  if (text == "matrix") return IterateMode::kMatrix;
  if (text == "sampling") return IterateMode::kSampling;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected matrix or sampling)");
}

std::string_view to_string(InitKind k) { return k == InitKind::kIdentity ? "identity" : "random"; }

InitKind parse_init(std::string_view text) {
  if (text == "identity") return InitKind::kIdentity;
  if (text == "random") return InitKind::kRandom;
  throw ConfigError("unknown initializer '" + std::string(text) + "' (expected identity or random)");
}

std::string_view to_string(StopReason r) { return r == StopReason::kConverged ? "converged" : "max_iters"; }

void SolverConfig::validate(const BarrierParams& params) const {
  params.validate();
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (epsilon > params.gap_threshold())
    throw ConfigError("epsilon = " + std::to_string(epsilon) + " exceeds theta + R_g = " +
                      std::to_string(params.gap_threshold()));
  if (l < 1) throw ConfigError("l must be >= 1");
  if (!(kappa >= 1.0)) throw ConfigError("kappa must be >= 1");
  if (!(c > 2.0)) throw ConfigError("c must exceed 2");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  if (!(p_bar > 0.0 && p_bar < 1.0)) throw ConfigError("p_bar must lie in (0, 1)");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(fault_q >= 0.0 && fault_q < 1.0)) throw ConfigError("fault probability must lie in [0, 1)");
}

double step_size(double g_approx, double d_t) {
  if (!(g_approx >= 0.0) || !(d_t >= 0.0)) throw ConfigError("step_size: arguments must be nonnegative");
  if (g_approx == 0.0) return 0.0;
  if (d_t == 0.0) return 1.0;
  return std::min(g_approx / (d_t * (d_t + g_approx)), 1.0);
}

double next_delta(const SolverConfig& config, const BarrierParams& params, long t, std::optional<double> gap_min) {
  switch (config.variant) {
    case Variant::kApproxI: {
      const double delta = config.schedule ? config.schedule(t) : config.epsilon / 2.0;
      if (!(delta > 0.0)) throw ConfigError("scheduled delta_t must be positive");
      return delta;
    }
    case Variant::kApproxII:
      return config.epsilon / config.kappa + gap_min.value_or(params.gap_threshold());
    case Variant::kExact:
      return 0.0;
  }
  return 0.0;
}

std::unique_ptr<Oracle> make_oracle(const SolverConfig& config) {
  std::unique_ptr<Oracle> oracle;
  if (config.variant == Variant::kExact) {
    oracle = std::make_unique<ExactOracle>(config.dense_cap);
  } else {
    OracleConfig oc;
    oc.c = config.c;
    oc.p = config.p;
    oc.retry_on_negative = config.retry_on_negative;
    oc.dense_cap = config.dense_cap;
    oracle = std::make_unique<LanczosOracle>(oc);
  }
  if (config.fault_q > 0.0)
    oracle = fault_injecting_plmo(std::move(oracle), config.fault_q, make_stream(config.seed, Stream::kFault));
  return oracle;
}

InitialPoint make_initial_point(const Instance& inst, InitKind init, IterateMode mode, std::uint64_t seed,
                                Rng& sampling, Index dense_cap) {
  const Index n = inst.n();
  const Index d = inst.d();
  const bool want_x = mode == IterateMode::kMatrix;
  if (want_x && n > dense_cap)
    throw ConfigError("matrix mode needs n <= " + std::to_string(dense_cap) + "; use sampling mode");
  InitialPoint ip;

  if (init == InitKind::kIdentity) {
    ip.v = inst.traces() / static_cast<double>(n);
    if (want_x)
      ip.x = Matrix::Identity(n, n) / static_cast<double>(n);
    else
      ip.z = init_samples(n, sampling);
    return ip;
  }

  // W = sum_j g_j g_j^T is streamed one column at a time so sampling mode
  // never holds more than a few n-vectors. Both modes see the same v.
  Rng init_rng = make_stream(seed, Stream::kInit);
  double total = 0.0;
  ip.v = Vector::Zero(d);
  if (want_x)
    ip.x = Matrix::Zero(n, n);
  else
    ip.z = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    const Vector g = gaussian_vector(n, init_rng);
    total += g.squaredNorm();
    for (Index i = 0; i < d; ++i) ip.v(i) += inst.quad_form(i, g);
    if (want_x)
      ip.x->selfadjointView<Eigen::Lower>().rankUpdate(g);
    else
      *ip.z += draw_zeta(sampling) * g;
  }
  ip.v /= total;
  if (want_x) {
    ip.x->triangularView<Eigen::StrictlyUpper>() = ip.x->transpose();
    *ip.x /= total;
  } else {
    *ip.z /= std::sqrt(total);
  }
  return ip;
}

char partition_label(double g_approx, double delta_opt, double C, double theta, double R_g) {
  if (g_approx > theta + R_g) return 'r';
  if (g_approx >= delta_opt / (2.0 * C + 1.0)) return 's';
  return 'q';
}

PartitionCounts partition_iterates(std::vector<TraceRecord>& trace, double C, double theta, double R_g) {
  if (!(C >= 0.0)) throw ConfigError("partition_iterates: C must be nonnegative");
  PartitionCounts counts;
  for (auto& rec : trace) {
    if (!rec.delta_opt) throw ConfigError("partition_iterates: iterate " + std::to_string(rec.t) + " has no Delta_t");
    rec.label = partition_label(rec.g_approx, *rec.delta_opt, C, theta, R_g);
    switch (*rec.label) {
      case 'r':
        ++counts.N_r;
        break;
      case 's':
        ++counts.N_s;
        break;
      default:
        ++counts.N_q;
    }
  }
  return counts;
}

double hoeffding_M(int l, double p_bar, double p) {
  if (l < 1) throw ConfigError("hoeffding_M: l must be >= 1");
  if (!(p > 0.0 && p < 1.0) || !(p_bar > 0.0 && p_bar <= 1.0))
    throw ConfigError("hoeffding_M: probabilities out of range");
  const double log_inv = std::log(1.0 / p_bar);
  return (static_cast<double>(l) - 1.0 + log_inv) / (1.0 - p) + 2.0 * log_inv;
}

double partition_constant(Variant v) {
  switch (v) {
    case Variant::kApproxI:
      return 0.5;
    case Variant::kApproxII:
      return 1.0;
    case Variant::kExact:
      return 0.0;
  }
  return 0.0;
}

TheoryBounds bounds(Variant variant, double delta0, double theta, double R_g, double epsilon, int l, double p,
                    double p_bar) {
  if (!(delta0 >= 0.0)) throw ConfigError("bounds: delta0 must be nonnegative");
  if (!(epsilon > 0.0)) throw ConfigError("bounds: epsilon must be positive");
  const double big = theta + R_g;
  const double sq = big * big / epsilon;
  TheoryBounds b;
  b.variant = variant;
  b.delta0_bound = delta0;
  b.C = partition_constant(variant);
  b.K_r = std::floor(10.6 * delta0);
  b.M_hoeffding = hoeffding_M(l, p_bar, p);
  const double head = std::ceil(10.6 * delta0);
  switch (variant) {
    case Variant::kApproxI:
      b.K_s = std::ceil(48.0 * sq);
      b.K_q = 1.0;
      b.K_u = head + (static_cast<double>(l) + 1.0) * b.K_s + 2.0 + b.M_hoeffding;
      break;
    case Variant::kApproxII:
      b.K_s = std::ceil(72.0 * sq);
      b.K_q = 2.0 + std::ceil(std::log2(big / epsilon));
      b.K_u = head + 2.0 * b.K_s + 2.0 * b.K_q / (1.0 - p) + 2.0 * std::log(1.0 / p_bar);
      break;
    case Variant::kExact: {
      b.K_s = std::ceil(24.0 * sq);
      b.K_q = 0.0;
      // log(10.6 delta0) turns nonpositive for tiny initial gaps; the r-phase
      // term is then dropped.
      const double lg = std::log(10.6 * delta0);
      const double r_phase = lg > 0.0 ? std::ceil(5.3 * (delta0 + big) * lg) : 0.0;
      b.K_u = r_phase + b.K_s;
      break;
    }
  }
  return b;
}

SolveResult solve(const Instance& inst, const BarrierParams& params, const SolverConfig& config) {
  auto oracle = make_oracle(config);
  return solve(inst, params, config, *oracle);
}

SolveResult solve(const Instance& inst, const BarrierParams& params, const SolverConfig& config, Oracle& oracle) {
  config.validate(params);
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const double theta = params.theta;
  const double R_g = params.R_g;
  const double C = partition_constant(config.variant);

  SolveResult res;
  Rng oracle_rng = make_stream(config.seed, Stream::kOracle);
  Rng sampling_rng = make_stream(config.seed, Stream::kSampling);
  InitialPoint ip = make_initial_point(inst, config.init, config.mode, config.seed, sampling_rng, config.dense_cap);
  Vector v = std::move(ip.v);
  const bool has_x = ip.x.has_value();
  const bool has_z = ip.z.has_value();
  Matrix x = has_x ? std::move(*ip.x) : Matrix();
  Vector z = has_z ? std::move(*ip.z) : Vector();

  double delta0 = static_cast<double>(inst.d()) * std::log(static_cast<double>(inst.n()));
  if (config.init == InitKind::kRandom) {
    if (config.f_star)
      delta0 = f_value(v) - *config.f_star;
    else
      res.warnings.push_back("random initializer with unknown F*: bounds use d log n for the initial gap");
  }
  res.bounds = bounds(config.variant, delta0, theta, R_g, config.epsilon, config.l, config.p, config.p_bar);

  const FaultInjectingOracle* faulty = dynamic_cast<const FaultInjectingOracle*>(&oracle);

  std::optional<double> gap_min;
  double last_g = 0.0;
  double last_delta = 0.0;
  int hits = 0;
  const double stop_delta = stop_delta_threshold(config.epsilon);
  long t = 0;
  for (;; ++t) {
    if (t >= config.max_iters) {
      res.reason = StopReason::kMaxIters;
      break;
    }
    const double delta = next_delta(config, params, t, gap_min);
    OracleOutput out = oracle.query(inst, v, delta, oracle_rng);
    ++res.oracle_calls;
    if (!(out.g_approx >= 0.0)) throw Error("oracle returned a negative approximate gap");
    last_g = out.g_approx;
    last_delta = delta;

    TraceRecord rec;
    rec.t = t;
    rec.delta_t = delta;
    rec.g_approx = out.g_approx;
    rec.f_value = f_value(v);
    rec.oracle_iters = out.inner_iters;
    rec.stay = out.stay();
    rec.corrupted = out.corrupted;
    if (config.f_star) rec.delta_opt = rec.f_value - *config.f_star;
    if (config.diagnostics) {
      const OracleOutput exact = exact_lmo(inst, v, config.dense_cap);
      rec.gap_exact = exact.g_approx;
      const Conditions cond = classify_conditions(out, exact, theta, R_g, delta);
      rec.cond_c1 = cond.c1;
      rec.cond_c2 = cond.c2;
    }
    if (rec.delta_opt) rec.label = partition_label(rec.g_approx, *rec.delta_opt, C, theta, R_g);
    gap_min = gap_min ? std::min(*gap_min, out.g_approx) : out.g_approx;

    rec.d_t = hessian_distance(v, out.w);
    bool stop = false;
    if (out.g_approx <= config.epsilon && delta <= stop_delta) {
      ++hits;
      stop = hits == config.l;
    }
    rec.stop_hits = hits;

    if (stop) {
      rec.gamma_t = 0.0;
      res.reason = StopReason::kConverged;
      res.final_g_approx = out.g_approx;
      res.final_delta = delta;
      res.final_delta_opt = rec.delta_opt;
    } else {
      const double gamma = step_size(out.g_approx, rec.d_t);
      rec.gamma_t = gamma;
      Vector v_next = update_iterate(v, out.w, gamma);
      require_interior(v_next, "solve");
      v = std::move(v_next);
      if (has_x && out.direction) {
        x *= 1.0 - gamma;
        x.selfadjointView<Eigen::Lower>().rankUpdate(*out.direction, gamma);
      }
      if (has_z) {
        const double zeta = draw_zeta(sampling_rng);
        if (out.direction) z = update_sample_with(z, *out.direction, gamma, zeta);
      }
    }

    if (config.on_record) config.on_record(rec);
    if (config.keep_trace) res.trace.push_back(std::move(rec));
    if (stop) break;
  }

  res.K = res.reason == StopReason::kConverged ? t + 1 : t;
  if (res.reason == StopReason::kMaxIters) {
    res.final_g_approx = last_g;
    res.final_delta = last_delta;
    if (config.f_star) res.final_delta_opt = f_value(v) - *config.f_star;
  }
  res.v = std::move(v);
  if (has_x) {
    x.triangularView<Eigen::StrictlyUpper>() = x.transpose();
    res.x = std::move(x);
  }
  if (has_z) res.z = std::move(z);
  if (faulty) res.corrupted_calls = faulty->corrupted();
  res.seconds = std::chrono::duration<double>(clock::now() - start).count();
  return res;
}

}  // namespace scfw
