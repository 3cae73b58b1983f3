#include "scfw/instances.hpp"

#include "scfw/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace scfw {

Instance gen_diag(Index n, Index d) {
  if (n < 1 || d < 1) throw ConfigError("gen_diag: n and d must be >= 1");
  if (d > n) throw ConfigError("gen_diag: d = " + std::to_string(d) + " exceeds n = " + std::to_string(n));
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    Matrix b = Matrix::Zero(n, 1);
    b(i, 0) = static_cast<double>(i + 1);
    blocks.push_back(std::move(b));
  }
  return Instance(n, MatrixKind::kDiag, std::move(blocks));
}

DiagOptimum diag_optimum(Index n, Index d) {
  if (n < 1 || d < 1 || d > n) throw ConfigError("diag_optimum: need 1 <= d <= n");
  const double dd = static_cast<double>(d);
  DiagOptimum out;
  out.f_star = dd * std::log(dd) - std::lgamma(dd + 1.0);
  out.description = "X* = I/" + std::to_string(d) + " on the leading " + std::to_string(d) + "x" +
                    std::to_string(d) + " block, zero elsewhere";
  return out;
}

Vector diag_optimal_v(Index d) {
  return Vector::LinSpaced(d, 1.0, static_cast<double>(d)) / static_cast<double>(d);
}

Instance gen_rnd(Index n, Index d, Rng& rng) {
  if (n < 1 || d < 1) throw ConfigError("gen_rnd: n and d must be >= 1");
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    Matrix u(n, n);
    for (Index j = 0; j < n; ++j) u.col(j) = gaussian_vector(n, rng);
    blocks.push_back(std::move(u));
  }
  return Instance(n, MatrixKind::kFactors, std::move(blocks));
}

bool is_diag_family(const Instance& inst) {
  if (inst.kind() != MatrixKind::kDiag || inst.d() > inst.n()) return false;
  for (Index i = 0; i < inst.d(); ++i) {
    const auto col = inst.block(i).col(0);
    for (Index k = 0; k < inst.n(); ++k)
      if (col(k) != (k == i ? static_cast<double>(i + 1) : 0.0)) return false;
  }
  return true;
}

void write_instance(std::ostream& os, const Instance& inst) {
  const Index n = inst.n();
  os << kInstanceTag << '\n' << n << ' ' << inst.d() << ' ' << to_string(inst.kind()) << '\n';
  auto row = [&](auto&& values) {
    for (Index k = 0; k < values.size(); ++k) {
      if (k) os << ' ';
      os << format_real(values(k));
    }
    os << '\n';
  };
  for (Index i = 0; i < inst.d(); ++i) {
    const Matrix& b = inst.block(i);
    switch (inst.kind()) {
      case MatrixKind::kDiag:
        row(b.col(0));
        break;
      case MatrixKind::kDense:
        for (Index r = 0; r < n; ++r) row(b.row(r));
        break;
      case MatrixKind::kFactors:
        os << b.cols() << '\n';
        for (Index j = 0; j < b.cols(); ++j) row(b.col(j));
        break;
    }
  }
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::vector<std::string> next(const char* what) {
    std::string line;
    if (!std::getline(is_, line)) throw FormatError(std::string("unexpected end of file, expected ") + what, line_ + 1);
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
  }

  std::string raw(const char* what) {
    std::string line;
    if (!std::getline(is_, line)) throw FormatError(std::string("unexpected end of file, expected ") + what, line_ + 1);
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  int line() const { return line_; }

 private:
  std::istream& is_;
  int line_{0};
};

Index parse_count(const std::string& tok, int line, const char* what) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || value < 1) throw FormatError(std::string("invalid ") + what + " '" + tok + "'", line);
  return static_cast<Index>(value);
}

Vector parse_row(LineReader& in, Index n, const char* what) {
  const auto tokens = in.next(what);
  if (static_cast<Index>(tokens.size()) != n)
    throw FormatError(std::string(what) + ": expected " + std::to_string(n) + " values, got " +
                          std::to_string(tokens.size()),
                      in.line());
  Vector out(n);
  for (Index k = 0; k < n; ++k) out(k) = parse_real(tokens[static_cast<std::size_t>(k)], in.line());
  return out;
}

}  // namespace

Instance read_instance(std::istream& is) {
  LineReader in(is);
  const std::string tag = in.raw("header");
  if (tag != kInstanceTag)
    throw FormatError("unsupported header '" + tag + "', expected '" + kInstanceTag + "'", in.line());
  const auto dims = in.next("'n d kind'");
  if (dims.size() != 3) throw FormatError("expected 'n d kind'", in.line());
  const Index n = parse_count(dims[0], in.line(), "n");
  const Index d = parse_count(dims[1], in.line(), "d");
  MatrixKind kind;
  try {
    kind = parse_matrix_kind(dims[2]);
  } catch (const ConfigError& e) {
    throw FormatError(e.what(), in.line());
  }
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    switch (kind) {
      case MatrixKind::kDiag:
        blocks.emplace_back(parse_row(in, n, "diagonal"));
        break;
      case MatrixKind::kDense: {
        Matrix a(n, n);
        for (Index r = 0; r < n; ++r) a.row(r) = parse_row(in, n, "matrix row").transpose();
        blocks.push_back(std::move(a));
        break;
      }
      case MatrixKind::kFactors: {
        const auto count = in.next("factor count");
        if (count.size() != 1) throw FormatError("expected a factor count", in.line());
        const Index m = parse_count(count[0], in.line(), "factor count");
        Matrix u(n, m);
        for (Index j = 0; j < m; ++j) u.col(j) = parse_row(in, n, "factor");
        blocks.push_back(std::move(u));
        break;
      }
    }
  }
  return Instance(n, kind, std::move(blocks));
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_instance(out, inst);
  if (!out) throw IoError("write failed: " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_instance(in);
}

}  // namespace scfw
