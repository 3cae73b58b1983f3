#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace scfw {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A barrier coordinate left the open positive orthant.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dense fallback requested above its size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline void require_dims(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

using Rng = std::mt19937_64;

// Named, independently seeded RNG streams derived from one master seed.
enum class Stream : std::uint64_t {
  kOracle = 1,
  kFault = 2,
  kSampling = 3,
  kInit = 4,
  kInstance = 5,
};

inline Rng make_stream(std::uint64_t master_seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x5cf3u};
  return Rng(seq);
}

// i.i.d. standard normal vector.
inline Vector gaussian_vector(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector g(n);
  for (Index i = 0; i < n; ++i) g(i) = normal(rng);
  return g;
}

// Uniform on the unit sphere.
inline Vector random_unit_vector(Index n, Rng& rng) {
  Vector g = gaussian_vector(n, rng);
  double nrm = g.norm();
  while (nrm == 0.0) {
    g = gaussian_vector(n, rng);
    nrm = g.norm();
  }
  return g / nrm;
}

}  // namespace scfw
