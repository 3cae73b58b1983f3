#pragma once

#include "scfw/common.hpp"
#include "scfw/linmap.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace scfw {

/// [A_i]_ii = i for i = 1..d, every other entry zero.
Instance gen_diag(Index n, Index d);

struct DiagOptimum {
  double f_star{0};         // d log d - log(d!)
  std::string description;  // the optimal X in words
};

/// Closed-form optimum of the diagonal family: X* = I/d on the leading d x d block.
DiagOptimum diag_optimum(Index n, Index d);

/// v* = B(X*) = (i/d)_i for the diagonal family.
Vector diag_optimal_v(Index d);

/// A_i = sum_{j<=n} u_j u_j^T with u_j ~ N(0, I), stored as n x n factors.
Instance gen_rnd(Index n, Index d, Rng& rng);

/// Recognizes an instance that is exactly gen_diag(n, d).
bool is_diag_family(const Instance& inst);

inline constexpr const char* kInstanceTag = "scfw-instance v1";

void write_instance(std::ostream& os, const Instance& inst);
Instance read_instance(std::istream& is);

void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

}  // namespace scfw
