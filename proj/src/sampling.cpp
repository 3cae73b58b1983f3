#include "scfw/sampling.hpp"

#include <cmath>

namespace scfw {

Vector init_samples(Index n, Rng& rng) {
  require_dims(n >= 1, "init_samples: n must be >= 1");
  return gaussian_vector(n, rng) / std::sqrt(static_cast<double>(n));
}

double draw_zeta(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

Vector update_sample(const Vector& z, const Vector& u, double gamma, Rng& rng) {
  return update_sample_with(z, u, gamma, draw_zeta(rng));
}

SolveResult run_sampling_mode(const Instance& inst, const BarrierParams& params, SolverConfig config, Oracle& oracle) {
  config.mode = IterateMode::kSampling;
  return solve(inst, params, config, oracle);
}

Matrix replica_covariance(Index n, const std::vector<ChainStep>& steps, long replicas, std::uint64_t seed) {
  if (replicas < 1) throw ConfigError("replica_covariance: need at least one replica");
  Matrix acc = Matrix::Zero(n, n);
  for (long r = 0; r < replicas; ++r) {
    Rng rng = make_stream(seed + static_cast<std::uint64_t>(r), Stream::kSampling);
    Vector z = init_samples(n, rng);
    for (const auto& step : steps) {
      const double zeta = draw_zeta(rng);
      if (step.u) z = update_sample_with(z, *step.u, step.gamma, zeta);
    }
    acc.selfadjointView<Eigen::Lower>().rankUpdate(z);
  }
  acc.triangularView<Eigen::StrictlyUpper>() = acc.transpose();
  return acc / static_cast<double>(replicas);
}

Matrix tracked_covariance(Index n, const std::vector<ChainStep>& steps) {
  Matrix x = Matrix::Identity(n, n) / static_cast<double>(n);
  for (const auto& step : steps) {
    if (!step.u) continue;
    x = (1.0 - step.gamma) * x + step.gamma * (*step.u) * step.u->transpose();
  }
  return x;
}

}  // namespace scfw
