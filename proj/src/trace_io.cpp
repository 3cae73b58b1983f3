#include "scfw/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace scfw {

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view token, int line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw FormatError("expected a real number, got '" + std::string(token) + "'", line);
  return x;
}

void write_trace_header(std::ostream& os) { os << kTraceHeader << '\n'; }

void write_trace_row(std::ostream& os, const TraceRecord& rec) {
  os << rec.t << ',' << format_real(rec.delta_t) << ',' << format_real(rec.g_approx) << ',' << format_real(rec.d_t)
     << ',' << format_real(rec.gamma_t) << ',' << format_real(rec.f_value) << ',';
  if (rec.delta_opt) os << format_real(*rec.delta_opt);
  os << ',';
  if (rec.gap_exact) os << format_real(*rec.gap_exact);
  os << ',';
  if (rec.label) os << *rec.label;
  os << ',' << rec.oracle_iters << ',' << rec.stop_hits << '\n';
}

void write_trace(std::ostream& os, const std::vector<TraceRecord>& trace) {
  write_trace_header(os);
  for (const auto& rec : trace) write_trace_row(os, rec);
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_long(std::string_view token, int line) {
  long x = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw FormatError("expected an integer, got '" + std::string(token) + "'", line);
  return x;
}

}  // namespace

std::vector<TraceRecord> read_trace(std::istream& is) {
  std::string line;
  int lineno = 1;
  if (!std::getline(is, line) || line != kTraceHeader) throw FormatError("missing trace header", lineno);
  std::vector<TraceRecord> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) throw FormatError("expected 11 fields", lineno);
    TraceRecord rec;
    rec.t = parse_long(f[0], lineno);
    rec.delta_t = parse_real(f[1], lineno);
    rec.g_approx = parse_real(f[2], lineno);
    rec.d_t = parse_real(f[3], lineno);
    rec.gamma_t = parse_real(f[4], lineno);
    rec.f_value = parse_real(f[5], lineno);
    if (!f[6].empty()) rec.delta_opt = parse_real(f[6], lineno);
    if (!f[7].empty()) rec.gap_exact = parse_real(f[7], lineno);
    if (!f[8].empty()) rec.label = f[8].front();
    rec.oracle_iters = static_cast<int>(parse_long(f[9], lineno));
    rec.stop_hits = static_cast<int>(parse_long(f[10], lineno));
    out.push_back(rec);
  }
  return out;
}

void write_summary(std::ostream& os, const SolveResult& res, std::uint64_t seed) {
  os << kSummaryHeader << '\n';
  os << res.K << ',' << to_string(res.reason) << ',' << format_real(res.seconds) << ','
     << format_real(res.bounds.K_u) << ',' << seed << ',' << format_real(res.final_g_approx) << ','
     << format_real(res.final_delta) << ',';
  if (res.final_delta_opt) os << format_real(*res.final_delta_opt);
  os << '\n';
}

void write_sample_state(std::ostream& os, const Vector& z, const Vector& v, std::uint64_t seed, long iterations) {
  os << "n " << z.size() << '\n' << "d " << v.size() << '\n';
  os << "seed " << seed << '\n' << "iterations " << iterations << '\n';
  os << "z\n";
  for (Index i = 0; i < z.size(); ++i) os << format_real(z(i)) << '\n';
  os << "v\n";
  for (Index i = 0; i < v.size(); ++i) os << format_real(v(i)) << '\n';
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize k = 0; k < got; ++k) {
      h ^= static_cast<unsigned char>(buf[k]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

}  // namespace scfw
