#include "app.hpp"

#include "scfw/instances.hpp"
#include "scfw/trace_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "scfw");
  return scfw::app::run(args);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

// Parses "K=..." from a solve run with a summary file.
long summary_k(const std::string& file) {
  std::istringstream in(slurp(file));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  return std::stol(row.substr(0, row.find(',')));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("generate writes a versioned instance file") {
    TempDir tmp("scfw_cli_generate");
    CHECK(run({"generate", "--kind", "diag", "--n", "4", "--d", "2", "--out", tmp / "d.txt"}) == 0);
    std::istringstream in(slurp(tmp / "d.txt"));
    std::string line;
    std::getline(in, line);
    CHECK(line == scfw::kInstanceTag);
    std::getline(in, line);
    CHECK(line == "4 2 diag");
    CHECK(scfw::is_diag_family(scfw::load_instance(tmp / "d.txt")));
  }

  TEST_CASE("exit codes") {
    TempDir tmp("scfw_cli_codes");
    CHECK(run({"generate", "--kind", "diag", "--n", "4", "--out", tmp / "d.txt"}) == 3);
    CHECK(run({"solve", "--instance", "diag:4:2", "--epsilon", "5"}) == 3);
    CHECK(run({"solve", "--instance", "diag:4:2", "--variant", "fastest"}) == 3);
    CHECK(run({"solve", "--instance", tmp / "nope.txt"}) == 4);
    CHECK(run({"solve", "--instance", "diag:50:10", "--max-iters", "3"}) == 2);
    CHECK(run({"solve", "--instance", "diag:10:2"}) == 0);
    std::ofstream(tmp / "bad.txt") << "not an instance\n";
    CHECK(run({"solve", "--instance", tmp / "bad.txt"}) == 4);
  }

  TEST_CASE("solve traces are byte-identical across repeated runs") {
    TempDir tmp("scfw_cli_traces");
    for (const char* variant : {"approxI", "approxII", "exact"}) {
      for (const char* mode : {"matrix", "sampling"}) {
        const std::vector<std::string> base{"solve", "--instance", "rnd:12:15:3", "--variant", variant, "--mode", mode,
                                            "--seed", "5", "--init", "random"};
        auto a = base, b = base;
        a.insert(a.end(), {"--trace-out", tmp / "a.csv"});
        b.insert(b.end(), {"--trace-out", tmp / "b.csv"});
        REQUIRE(run(a) == 0);
        REQUIRE(run(b) == 0);
        CHECK(slurp(tmp / "a.csv") == slurp(tmp / "b.csv"));
        CHECK(slurp(tmp / "a.csv").rfind(std::string(scfw::kTraceHeader) + "\n", 0) == 0);
      }
    }
  }

  TEST_CASE("diagnostic trace columns and recomputed K") {
    TempDir tmp("scfw_cli_diag");
    REQUIRE(run({"solve", "--kind", "diag", "--n", "20", "--d", "4", "--variant", "exact", "--diagnostics",
                 "--trace-out", tmp / "t.csv", "--summary-out", tmp / "s.csv"}) == 0);
    std::ifstream in(tmp / "t.csv");
    const auto trace = scfw::read_trace(in);
    REQUIRE_FALSE(trace.empty());
    CHECK(static_cast<long>(trace.size()) == summary_k(tmp / "s.csv"));
    CHECK(trace.front().gap_exact.has_value());
    CHECK(trace.front().delta_opt.has_value());
    CHECK(trace.front().label.has_value());
    CHECK(*trace.back().delta_opt <= 0.125);
  }

  TEST_CASE("bench on an empty manifest prints only the header") {
    TempDir tmp("scfw_cli_bench_empty");
    std::ofstream(tmp / "m.csv") << "instance,variant,epsilon,l,p,seed,mode\n";
    REQUIRE(run({"bench", "--manifest", tmp / "m.csv", "--out", tmp / "o.csv"}) == 0);
    CHECK(slurp(tmp / "o.csv") == "n,d,algorithm,avg_seconds,K_u,avg_K,std_K\n");
  }

  TEST_CASE("bench averages the per-run iteration counts and is reproducible") {
    TempDir tmp("scfw_cli_bench");
    std::ofstream(tmp / "m.csv") << "instance,variant,epsilon,l,p,seed,mode,replicates\n"
                                 << "diag:30:6,approxI,0.05,1,0.1,4,matrix,3\n"
                                 << "diag:30:6,exact,0.05,1,0.1,4,matrix,1\n";
    REQUIRE(run({"bench", "--manifest", tmp / "m.csv", "--out", tmp / "o1.csv"}) == 0);
    REQUIRE(run({"bench", "--manifest", tmp / "m.csv", "--out", tmp / "o2.csv", "--jobs", "2"}) == 0);

    std::vector<long> ks;
    for (int k = 0; k < 3; ++k) {
      REQUIRE(run({"solve", "--instance", "diag:30:6", "--variant", "approxI", "--seed", std::to_string(4 + k),
                   "--summary-out", tmp / "s.csv"}) == 0);
      ks.push_back(summary_k(tmp / "s.csv"));
    }
    const double mean = (ks[0] + ks[1] + ks[2]) / 3.0;

    std::istringstream in(slurp(tmp / "o1.csv"));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 7);
    CHECK(cells[0] == "30");
    CHECK(cells[1] == "6");
    CHECK(cells[2] == "approxI");
    CHECK(std::stod(cells[5]) == doctest::Approx(mean).epsilon(1e-12));

    // Everything except the timing column must agree between the two runs.
    auto strip_time = [](const std::string& text) {
      std::istringstream s(text);
      std::string out, l;
      while (std::getline(s, l)) {
        std::vector<std::string> c;
        std::stringstream r(l);
        for (std::string x; std::getline(r, x, ',');) c.push_back(x);
        c[3].clear();
        for (const auto& x : c) out += x + ",";
        out += "\n";
      }
      return out;
    };
    CHECK(strip_time(slurp(tmp / "o1.csv")) == strip_time(slurp(tmp / "o2.csv")));
  }
}
