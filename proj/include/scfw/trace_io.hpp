#pragma once

#include "scfw/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace scfw {

/// Shortest decimal text that reads back to the same double.
std::string format_real(double x);

/// Parses a whole token as a double (locale independent). Throws FormatError.
double parse_real(std::string_view token, int line = 0);

inline constexpr const char* kTraceHeader = "t,delta_t,G_a,D_t,gamma_t,F,Delta,G_exact,label,oracle_iters,stop_hits";
inline constexpr const char* kSummaryHeader = "K,stop_reason,seconds,K_u,seed,final_G_a,final_delta,Delta";

void write_trace_header(std::ostream& os);
void write_trace_row(std::ostream& os, const TraceRecord& rec);
void write_trace(std::ostream& os, const std::vector<TraceRecord>& trace);

/// Parses a trace written by write_trace (used to recompute K from files).
std::vector<TraceRecord> read_trace(std::istream& is);

void write_summary(std::ostream& os, const SolveResult& res, std::uint64_t seed);

/// n, d, seed, iteration count, then z and v, one value per line.
void write_sample_state(std::ostream& os, const Vector& z, const Vector& v, std::uint64_t seed, long iterations);

/// 64-bit FNV-1a over the bytes of a file.
std::uint64_t file_checksum(const std::filesystem::path& path);
std::string hex64(std::uint64_t x);

}  // namespace scfw
