#include "scfw/eigensolver.hpp"

#include <cmath>

namespace scfw {

int lanczos_iters_for(double rho, Index n, double p) {
  if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("lanczos_iters_for: rho must lie in (0, 1]");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("lanczos_iters_for: p must lie in (0, 1]");
  if (n < 1) throw ConfigError("lanczos_iters_for: n must be >= 1");
  const double count = 0.5 + std::log(4.0 * static_cast<double>(n) / (p * p)) / std::sqrt(rho);
  return static_cast<int>(std::ceil(count));
}

}  // namespace scfw
