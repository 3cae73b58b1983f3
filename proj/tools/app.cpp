#include "app.hpp"

#include "scfw/instances.hpp"
#include "scfw/solver.hpp"
#include "scfw/trace_io.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

namespace scfw::app {
namespace {

struct SolveOptions {
  std::string instance;
  std::string kind;
  long n{0};
  long d{0};
  std::uint64_t instance_seed{0};
  std::uint64_t seed{0};
  std::string variant{"approxI"};
  double epsilon{0.05};
  int l{1};
  double p{0.1};
  double p_bar{0.1};
  std::string mode{"matrix"};
  std::string init{"identity"};
  bool diagnostics{false};
  long max_iters{1'000'000};
  double fault_q{0.0};
  std::string trace_out;
  std::string summary_out;
  std::string state_out;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

Instance generate(const std::string& kind, long n, long d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("--n and --d must be positive");
  if (kind == "diag") return gen_diag(n, d);
  if (kind == "rnd") {
    Rng rng = make_stream(seed, Stream::kInstance);
    return gen_rnd(n, d, rng);
  }
  throw ConfigError("unknown --kind '" + kind + "' (expected diag or rnd)");
}

// "diag:N:D", "rnd:N:D:SEED" or a file path.
Instance resolve_instance(const std::string& spec, const std::string& base_dir = "") {
  auto fields = [&]() {
    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string f;
    while (std::getline(ss, f, ':')) out.push_back(f);
    return out;
  }();
  auto to_long = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const long x = std::stol(s, &pos);
      if (pos == s.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("bad number '" + s + "' in instance spec '" + spec + "'");
  };
  if (fields.size() == 3 && fields[0] == "diag") return generate("diag", to_long(fields[1]), to_long(fields[2]), 0);
  if (fields.size() == 4 && fields[0] == "rnd")
    return generate("rnd", to_long(fields[1]), to_long(fields[2]), static_cast<std::uint64_t>(to_long(fields[3])));
  std::filesystem::path path(spec);
  if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
  try {
    return load_instance(path);
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid instance data: ") + e.what(), 0);
  } catch (const DimensionError& e) {
    throw FormatError(std::string("invalid instance data: ") + e.what(), 0);
  }
}

SolverConfig make_config(const Instance& inst, const SolveOptions& o) {
  SolverConfig c;
  c.variant = parse_variant(o.variant);
  c.epsilon = o.epsilon;
  c.l = o.l;
  c.p = o.p;
  c.p_bar = o.p_bar;
  c.seed = o.seed;
  c.mode = parse_mode(o.mode);
  c.init = parse_init(o.init);
  c.diagnostics = o.diagnostics;
  c.max_iters = o.max_iters;
  c.fault_q = o.fault_q;
  if (is_diag_family(inst)) c.f_star = diag_optimum(inst.n(), inst.d()).f_star;
  return c;
}

int cmd_generate(const std::string& kind, long n, long d, std::uint64_t seed, const std::string& out_path) {
  const Instance inst = generate(kind, n, d, seed);
  save_instance(inst, out_path);
  std::cout << "wrote " << out_path << " (" << n << ' ' << d << ' ' << to_string(inst.kind())
            << ") checksum " << hex64(file_checksum(out_path)) << '\n';
  return kSuccess;
}

int cmd_solve(const SolveOptions& o) {
  Instance inst = [&]() {
    if (!o.instance.empty()) return resolve_instance(o.instance);
    if (o.kind.empty()) throw ConfigError("solve needs --instance or --kind/--n/--d");
    return generate(o.kind, o.n, o.d, o.instance_seed);
  }();
  const SolverConfig config = make_config(inst, o);
  const BarrierParams params = log_barrier_params(inst.d());
  const SolveResult res = solve(inst, params, config);

  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  if (!o.trace_out.empty()) {
    auto out = open_out(o.trace_out);
    write_trace(out, res.trace);
  }
  if (!o.summary_out.empty()) {
    auto out = open_out(o.summary_out);
    write_summary(out, res, o.seed);
  }
  if (!o.state_out.empty()) {
    if (!res.z) throw ConfigError("--state-out needs --mode sampling");
    auto out = open_out(o.state_out);
    write_sample_state(out, *res.z, res.v, o.seed, res.K);
  }
  std::cout << "K=" << res.K << " stop=" << to_string(res.reason) << " seconds=" << format_real(res.seconds)
            << " K_u=" << format_real(res.bounds.K_u) << " final_G_a=" << format_real(res.final_g_approx)
            << " final_delta=" << format_real(res.final_delta);
  if (res.final_delta_opt) std::cout << " Delta=" << format_real(*res.final_delta_opt);
  std::cout << '\n';
  return res.reason == StopReason::kConverged ? kSuccess : kNonconvergence;
}

struct BenchRow {
  std::string instance;
  std::string variant;
  double epsilon{0};
  int l{1};
  double p{0};
  std::uint64_t seed{0};
  std::string mode;
  long replicates{1};
};

std::vector<BenchRow> read_manifest(std::istream& in) {
  std::vector<BenchRow> rows;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!header) {
      const std::vector<std::string> want{"instance", "variant", "epsilon", "l", "p", "seed", "mode"};
      if (f.size() < want.size() || !std::equal(want.begin(), want.end(), f.begin()) ||
          (f.size() == 8 && f[7] != "replicates") || f.size() > 8)
        throw FormatError("manifest header must be instance,variant,epsilon,l,p,seed,mode[,replicates]", lineno);
      header = true;
      continue;
    }
    if (f.size() != 7 && f.size() != 8) throw FormatError("expected 7 or 8 fields", lineno);
    BenchRow r;
    try {
      r.instance = f[0];
      r.variant = f[1];
      parse_variant(r.variant);
      r.epsilon = parse_real(f[2], lineno);
      r.l = std::stoi(f[3]);
      r.p = parse_real(f[4], lineno);
      r.seed = std::stoull(f[5]);
      r.mode = f[6];
      parse_mode(r.mode);
      if (f.size() == 8) r.replicates = std::stol(f[7]);
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError(std::string("bad field: ") + e.what(), lineno);
    }
    if (r.replicates < 1) throw FormatError("replicates must be >= 1", lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

int cmd_bench(const std::string& manifest_path, const std::string& out_path, const std::string& init, long max_iters,
              unsigned jobs) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open " + manifest_path);
  const auto rows = read_manifest(in);
  const std::string base_dir = std::filesystem::path(manifest_path).parent_path().string();

  std::map<std::string, std::shared_ptr<const Instance>> instances;
  for (const auto& r : rows)
    if (!instances.count(r.instance))
      instances[r.instance] = std::make_shared<const Instance>(resolve_instance(r.instance, base_dir));

  struct Run {
    std::size_t group;
    const BenchRow* row;
    std::uint64_t seed;
    SolveResult result;
  };
  std::vector<std::pair<std::string, std::string>> groups;
  std::vector<Run> runs;
  for (const auto& r : rows) {
    std::size_t g = 0;
    while (g < groups.size() && groups[g] != std::make_pair(r.instance, r.variant)) ++g;
    if (g == groups.size()) groups.emplace_back(r.instance, r.variant);
    for (long k = 0; k < r.replicates; ++k) runs.push_back({g, &r, r.seed + static_cast<std::uint64_t>(k), {}});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (std::size_t k = next++; k < runs.size(); k = next++) {
      try {
        Run& run = runs[k];
        const Instance& inst = *instances.at(run.row->instance);
        SolveOptions o;
        o.variant = run.row->variant;
        o.epsilon = run.row->epsilon;
        o.l = run.row->l;
        o.p = run.row->p;
        o.seed = run.seed;
        o.mode = run.row->mode;
        o.init = init;
        o.max_iters = max_iters;
        SolverConfig config = make_config(inst, o);
        config.keep_trace = false;
        run.result = solve(inst, log_barrier_params(inst.d()), config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::ostringstream csv;
  csv << "n,d,algorithm,avg_seconds,K_u,avg_K,std_K\n";
  bool all_converged = true;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<const SolveResult*> rs;
    for (const auto& run : runs)
      if (run.group == g) rs.push_back(&run.result);
    const double count = static_cast<double>(rs.size());
    double secs = 0, ku = 0, k_sum = 0;
    for (const auto* r : rs) {
      secs += r->seconds;
      ku += r->bounds.K_u;
      k_sum += static_cast<double>(r->K);
      all_converged = all_converged && r->reason == StopReason::kConverged;
    }
    const double mean_k = k_sum / count;
    double var = 0;
    for (const auto* r : rs) var += (static_cast<double>(r->K) - mean_k) * (static_cast<double>(r->K) - mean_k);
    const double std_k = rs.size() > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
    const Instance& inst = *instances.at(groups[g].first);
    csv << inst.n() << ',' << inst.d() << ',' << groups[g].second << ',' << format_real(secs / count) << ','
        << format_real(ku / count) << ',' << format_real(mean_k) << ',' << format_real(std_k) << '\n';
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    auto out = open_out(out_path);
    out << csv.str();
  }
  return all_converged ? kSuccess : kNonconvergence;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App cli{"Approximate generalized Frank-Wolfe for log-barrier problems over the spectrahedron"};
  cli.require_subcommand(1);

  std::string kind, out_path;
  long n = 0, d = 0;
  std::uint64_t gen_seed = 0;
  auto* gen = cli.add_subcommand("generate", "Write a test instance file");
  gen->add_option("--kind", kind, "diag or rnd")->required();
  gen->add_option("--n", n, "Matrix dimension")->required();
  gen->add_option("--d", d, "Number of data matrices")->required();
  gen->add_option("--seed", gen_seed, "Generator seed (rnd)");
  gen->add_option("--out", out_path, "Output file")->required();

  SolveOptions so;
  auto* sol = cli.add_subcommand("solve", "Run one solve");
  sol->add_option("--instance", so.instance, "Instance file, or diag:N:D / rnd:N:D:SEED");
  sol->add_option("--kind", so.kind, "Generate in memory: diag or rnd");
  sol->add_option("--n", so.n, "Matrix dimension (with --kind)");
  sol->add_option("--d", so.d, "Number of data matrices (with --kind)");
  sol->add_option("--instance-seed", so.instance_seed, "Generator seed (with --kind rnd)");
  sol->add_option("--seed", so.seed, "Solver seed");
  sol->add_option("--variant", so.variant, "approxI, approxII or exact")->capture_default_str();
  sol->add_option("--epsilon", so.epsilon, "Target accuracy")->capture_default_str();
  sol->add_option("--l", so.l, "Stopping repetition count")->capture_default_str();
  sol->add_option("--p", so.p, "Oracle failure probability")->capture_default_str();
  sol->add_option("--pbar", so.p_bar, "Confidence used in the iteration bound")->capture_default_str();
  sol->add_option("--mode", so.mode, "matrix or sampling")->capture_default_str();
  sol->add_option("--init", so.init, "identity or random")->capture_default_str();
  sol->add_flag("--diagnostics", so.diagnostics, "Track the exact gap each iteration (small n)");
  sol->add_option("--max-iters", so.max_iters, "Iteration cap")->capture_default_str();
  sol->add_option("--fault-q", so.fault_q, "Probability of a corrupted oracle answer")->capture_default_str();
  sol->add_option("--trace-out", so.trace_out, "Per-iteration CSV");
  sol->add_option("--summary-out", so.summary_out, "Summary CSV");
  sol->add_option("--state-out", so.state_out, "Final sample state (sampling mode)");

  std::string manifest, bench_out, bench_init = "identity";
  long bench_max_iters = 1'000'000;
  unsigned jobs = 1;
  auto* bench = cli.add_subcommand("bench", "Run a manifest of solves and aggregate");
  bench->add_option("--manifest", manifest, "CSV: instance,variant,epsilon,l,p,seed,mode[,replicates]")->required();
  bench->add_option("--summary-out,--out", bench_out, "Aggregated CSV (stdout if omitted)");
  bench->add_option("--init", bench_init, "identity or random")->capture_default_str();
  bench->add_option("--max-iters", bench_max_iters, "Iteration cap per run")->capture_default_str();
  bench->add_option("--jobs", jobs, "Parallel runs")->capture_default_str();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? kSuccess : kConfigError;
  }

  try {
    if (*gen) return cmd_generate(kind, n, d, gen_seed, out_path);
    if (*sol) return cmd_solve(so);
    if (*bench) return cmd_bench(manifest, bench_out, bench_init, bench_max_iters, jobs);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace scfw::app
