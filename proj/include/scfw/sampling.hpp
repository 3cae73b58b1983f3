#pragma once

// Low-memory iterate representation: a single Gaussian sample z ~ N(0, X_t)
// together with v = B(X_t). X_t itself is never formed.

#include "scfw/common.hpp"
#include "scfw/solver.hpp"

#include <cstdint>
#include <vector>

namespace scfw {

struct SampleState {
  Vector z;
  Vector v;
  long t{0};
};

/// z = g / sqrt(n) with g ~ N(0, I): a sample of N(0, I/n).
Vector init_samples(Index n, Rng& rng);

/// One standard normal draw from the sampling stream.
double draw_zeta(Rng& rng);

/// sqrt(1 - gamma) z + sqrt(gamma) zeta u with zeta drawn from rng.
Vector update_sample(const Vector& z, const Vector& u, double gamma, Rng& rng);

/// Same as above with zeta supplied.
template <typename DerivedZ, typename DerivedU>
Vector update_sample_with(const Eigen::MatrixBase<DerivedZ>& z, const Eigen::MatrixBase<DerivedU>& u, double gamma,
                          double zeta) {
  require_dims(z.size() == u.size(), "update_sample: length mismatch");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("update_sample: gamma must lie in [0, 1]");
  return std::sqrt(1.0 - gamma) * z + (std::sqrt(gamma) * zeta) * u;
}

/// solve() with the iterate held as (z, v).
SolveResult run_sampling_mode(const Instance& inst, const BarrierParams& params, SolverConfig config, Oracle& oracle);

/// One step of a replayed chain: the direction (empty when the oracle stayed)
/// and the step size taken.
struct ChainStep {
  std::optional<Vector> u;
  double gamma{0};
};

/// Empirical covariance of `replicas` independent z-chains started from
/// N(0, I/n) and driven by the same steps. Replica r uses the sampling stream
/// of seed + r.
Matrix replica_covariance(Index n, const std::vector<ChainStep>& steps, long replicas, std::uint64_t seed);

/// X_t tracked explicitly from X_0 = I/n through the same steps.
Matrix tracked_covariance(Index n, const std::vector<ChainStep>& steps);

}  // namespace scfw
