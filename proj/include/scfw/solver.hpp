#pragma once

#include "scfw/barrier.hpp"
#include "scfw/common.hpp"
#include "scfw/linmap.hpp"
#include "scfw/oracle.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scfw {

/// The three algorithm variants of the experiments.
///   approxI  - scheduled delta_t = eps/2, Lanczos oracle
///   approxII - adaptive delta_t = eps/kappa + min past G^a, Lanczos oracle
///   exact    - dense eigen-solve with delta_t = 0
enum class Variant { kApproxI, kApproxII, kExact };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

enum class IterateMode { kMatrix, kSampling };
std::string_view to_string(IterateMode m);
IterateMode parse_mode(std::string_view text);

/// X0 = I/n, or X0 = W / Tr(W) with W = sum_{j<=n} g_j g_j^T, g_j ~ N(0, I).
enum class InitKind { kIdentity, kRandom };
std::string_view to_string(InitKind k);
InitKind parse_init(std::string_view text);

enum class StopReason { kConverged, kMaxIters };
std::string_view to_string(StopReason r);

struct TraceRecord {
  long t{0};
  double delta_t{0};
  double g_approx{0};
  double d_t{0};
  double gamma_t{0};
  double f_value{0};
  std::optional<double> delta_opt;  // F - F*
  std::optional<double> gap_exact;
  std::optional<char> label;        // 'r', 's' or 'q'
  std::optional<bool> cond_c1;
  std::optional<bool> cond_c2;
  int oracle_iters{0};
  int stop_hits{0};
  bool stay{false};
  bool corrupted{false};
};

struct SolverConfig {
  double epsilon{0.05};
  int l{1};
  Variant variant{Variant::kApproxI};
  double kappa{2.0};
  double c{4.0};
  double p{0.1};
  double p_bar{0.1};
  std::uint64_t seed{0};
  long max_iters{1'000'000};
  IterateMode mode{IterateMode::kMatrix};
  InitKind init{InitKind::kIdentity};
  /// Track the exact gap with a dense solve every iteration (small n only).
  bool diagnostics{false};
  /// Known optimal value; enables Delta_t and the r/s/q labels.
  std::optional<double> f_star;
  /// Replaces the default scheduled sequence eps/2 for approxI.
  std::function<double(long)> schedule;
  /// Probability of a corrupted oracle answer (fault injection); 0 disables.
  double fault_q{0.0};
  bool retry_on_negative{false};
  Index dense_cap{2000};
  /// Keep the per-iteration records in the result.
  bool keep_trace{true};
  /// Called once per iteration with the finished record.
  std::function<void(const TraceRecord&)> on_record;

  void validate(const BarrierParams& params) const;
};

struct TheoryBounds {
  Variant variant{Variant::kApproxI};
  double K_r{0};
  double K_s{0};
  double K_q{0};
  double M_hoeffding{0};
  double K_u{0};
  double delta0_bound{0};
  double C{0};  // partition constant of the r/s/q split
};

struct SolveResult {
  Vector v;                  // B(X) at the returned iterate
  std::optional<Matrix> x;   // matrix mode
  std::optional<Vector> z;   // sampling mode
  std::vector<TraceRecord> trace;
  TheoryBounds bounds;
  StopReason reason{StopReason::kMaxIters};
  long K{0};  // iterations performed, the stopping iteration included
  double final_g_approx{0};
  double final_delta{0};
  std::optional<double> final_delta_opt;
  double seconds{0};
  std::size_t oracle_calls{0};
  std::size_t corrupted_calls{0};
  std::vector<std::string> warnings;
};

/// min(G / (D (D + G)), 1); 0 when G = 0 and 1 when D = 0 < G.
double step_size(double g_approx, double d_t);

/// delta_t for the variant. gap_min is the minimum G^a seen before t (empty
/// history: pass nullopt, which uses theta + R_g).
double next_delta(const SolverConfig& config, const BarrierParams& params, long t, std::optional<double> gap_min);

/// (1 - gamma) v + gamma w.
template <typename DerivedV, typename DerivedW>
Vector update_iterate(const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedW>& w, double gamma) {
  require_dims(v.size() == w.size(), "update_iterate: length mismatch");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("update_iterate: gamma must lie in [0, 1]");
  return (1.0 - gamma) * v + gamma * w;
}

/// Largest value of delta_t at which the stopping test may fire.
inline double stop_delta_threshold(double epsilon) { return 1.5 * epsilon; }

/// Oracle matching the variant (with fault injection when fault_q > 0).
std::unique_ptr<Oracle> make_oracle(const SolverConfig& config);

/// Runs the approximate generalized Frank-Wolfe loop with the count-l stop.
SolveResult solve(const Instance& inst, const BarrierParams& params, const SolverConfig& config, Oracle& oracle);
SolveResult solve(const Instance& inst, const BarrierParams& params, const SolverConfig& config);

struct PartitionCounts {
  long N_r{0};
  long N_s{0};
  long N_q{0};
};

/// Labels one iterate: r if G^a > theta + R_g, s if G^a >= Delta / (2C + 1), else q.
char partition_label(double g_approx, double delta_opt, double C, double theta, double R_g);

/// Labels every record (all of them need delta_opt) and counts each class.
PartitionCounts partition_iterates(std::vector<TraceRecord>& trace, double C, double theta, double R_g);

/// (l - 1 + log(1/p_bar)) / (1 - p) + 2 log(1/p_bar).
double hoeffding_M(int l, double p_bar, double p);

double partition_constant(Variant v);

TheoryBounds bounds(Variant variant, double delta0, double theta, double R_g, double epsilon, int l, double p,
                    double p_bar);

/// Initial iterate: v0 = B(X0), plus the dense X0 and/or the sample z0 the mode needs.
struct InitialPoint {
  Vector v;
  std::optional<Matrix> x;
  std::optional<Vector> z;
};

/// `sampling` is the sampling stream; z0 consumes its first draws.
InitialPoint make_initial_point(const Instance& inst, InitKind init, IterateMode mode, std::uint64_t seed,
                                Rng& sampling, Index dense_cap = 2000);

}  // namespace scfw
