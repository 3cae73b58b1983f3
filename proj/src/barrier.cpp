#include "scfw/barrier.hpp"

#include "scfw/linmap.hpp"

#include <cmath>

namespace scfw {

void BarrierParams::validate() const {
  if (!(theta >= 1.0)) throw ConfigError("barrier: theta must be >= 1, got " + std::to_string(theta));
  if (!(M > 0.0)) throw ConfigError("barrier: M must be positive");
  if (!(R_g >= 0.0)) throw ConfigError("barrier: R_g must be nonnegative");
}

BarrierParams rescale_to_standard(double theta_bar, double M) {
  if (!(M > 0.0)) throw ConfigError("rescale_to_standard: M must be positive");
  if (!(theta_bar >= 1.0)) throw ConfigError("rescale_to_standard: theta_bar must be >= 1");
  const double scale = M * M / 4.0;
  BarrierParams out{scale * theta_bar, 2.0, 0.0, scale};
  if (!(out.theta >= 1.0))
    throw ConfigError("rescale_to_standard: scaled theta = " + std::to_string(out.theta) + " < 1");
  return out;
}

InitialGapBound initial_gap_bound(const Instance& inst) {
  const double n = static_cast<double>(inst.n());
  const double d = static_cast<double>(inst.d());
  InitialGapBound out;
  out.bound = d * std::log(n);
  out.f_initial = f_value(Vector(inst.traces() / n));
  // Dual point lambda = d, y_i = 1 / Tr(A_i).
  out.dual_lower = -inst.traces().array().log().sum();
  return out;
}

}  // namespace scfw
