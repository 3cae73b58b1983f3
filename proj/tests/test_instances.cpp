#include "reference.hpp"

#include "scfw/barrier.hpp"
#include "scfw/instances.hpp"
#include "scfw/oracle.hpp"
#include "scfw/solver.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace scfw;

TEST_SUITE("instances") {
  TEST_CASE("gen_diag") {
    const Instance inst = gen_diag(5, 3);
    CHECK(inst.n() == 5);
    CHECK(inst.d() == 3);
    CHECK(inst.kind() == MatrixKind::kDiag);
    for (Index i = 0; i < 3; ++i) {
      const Matrix a = ref::dense_block(inst, i);
      CHECK(a(i, i) == static_cast<double>(i + 1));
      CHECK(a.sum() == static_cast<double>(i + 1));
    }
    CHECK(is_diag_family(inst));
    CHECK_THROWS_AS(gen_diag(3, 4), ConfigError);
    const Instance one = gen_diag(1, 1);
    CHECK(one.traces()(0) == 1.0);
  }

  TEST_CASE("diag_optimum") {
    CHECK(diag_optimum(5, 1).f_star == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(diag_optimum(5, 2).f_star == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // d log d - log d! by direct summation.
    for (Index d : {3, 10, 50}) {
      long double s = d * std::log(static_cast<long double>(d));
      for (Index k = 2; k <= d; ++k) s -= std::log(static_cast<long double>(k));
      CHECK(diag_optimum(2 * d, d).f_star == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
    }
  }

  TEST_CASE("the closed-form optimum is stationary and F* bounds every iterate") {
    const Index n = 12, d = 5;
    const Instance inst = gen_diag(n, d);
    const Vector vstar = diag_optimal_v(d);
    Matrix xstar = Matrix::Zero(n, n);
    xstar.topLeftCorner(d, d) = Matrix::Identity(d, d) / static_cast<double>(d);
    CHECK((ref::apply_map(inst, xstar) - vstar).norm() <= 1e-15);
    CHECK(f_value(vstar) == doctest::Approx(diag_optimum(n, d).f_star).epsilon(1e-13));
    CHECK(exact_lmo(inst, vstar).g_approx == doctest::Approx(0.0).epsilon(1e-12));

    SolverConfig cfg;
    cfg.variant = Variant::kExact;
    const SolveResult res = solve(inst, log_barrier_params(d), cfg);
    for (const auto& rec : res.trace) CHECK(rec.f_value >= diag_optimum(n, d).f_star - 1e-12);
    std::mt19937_64 gen(1);
    for (int k = 0; k < 50; ++k) {
      Matrix x = ref::random_psd(n, gen);
      x /= x.trace();
      CHECK(f_value(ref::apply_map(inst, x)) >= diag_optimum(n, d).f_star);
    }
  }

  TEST_CASE("gen_rnd traces follow the Wishart scale and are reproducible") {
    const Index n = 30, d = 40;
    Rng a = make_stream(7, Stream::kInstance), b = make_stream(7, Stream::kInstance);
    const Instance i1 = gen_rnd(n, d, a), i2 = gen_rnd(n, d, b);
    CHECK(i1.kind() == MatrixKind::kFactors);
    for (Index i = 0; i < d; ++i) CHECK(i1.block(i) == i2.block(i));
    // Tr A_i is chi-squared with n^2 degrees of freedom: mean n^2, sd n sqrt(2).
    const double mean = i1.traces().mean();
    CHECK(std::abs(mean - n * n) <= 5.0 * n * std::sqrt(2.0) / std::sqrt(static_cast<double>(d)));
    for (Index i = 0; i < d; ++i) CHECK(std::abs(i1.traces()(i) - n * n) <= 6.0 * n * std::sqrt(2.0));
    CHECK(i1.traces()(0) == doctest::Approx(ref::dense_block(i1, 0).trace()).epsilon(1e-12));
    CHECK_FALSE(is_diag_family(i1));
  }

  TEST_CASE("save and load round trips") {
    const auto dir = std::filesystem::temp_directory_path() / "scfw_instances_test";
    std::filesystem::create_directories(dir);

    const Instance diag = gen_diag(7, 3);
    save_instance(diag, dir / "diag.txt");
    const Instance diag2 = load_instance(dir / "diag.txt");
    CHECK(diag2.kind() == MatrixKind::kDiag);
    for (Index i = 0; i < 3; ++i) CHECK(diag2.block(i) == diag.block(i));
    CHECK(is_diag_family(diag2));

    Rng rng(2);
    const Instance rnd = gen_rnd(6, 4, rng);
    save_instance(rnd, dir / "rnd.txt");
    const Instance rnd2 = load_instance(dir / "rnd.txt");
    for (Index i = 0; i < 4; ++i) CHECK(rnd2.block(i) == rnd.block(i));

    std::mt19937_64 gen(3);
    std::vector<Matrix> blocks{ref::random_psd(5, gen), ref::random_psd(5, gen)};
    const Instance dense(5, MatrixKind::kDense, blocks);
    std::stringstream ss;
    write_instance(ss, dense);
    const Instance dense2 = read_instance(ss);
    for (Index i = 0; i < 2; ++i) CHECK((dense2.block(i) - dense.block(i)).cwiseAbs().maxCoeff() <= 1e-16 * 10);

    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_instance(dir / "missing.txt"), IoError);
  }

  TEST_CASE("format errors carry line numbers") {
    std::stringstream wrong_tag("scfw-instance v2\n1 1 diag\n1\n");
    try {
      read_instance(wrong_tag);
      FAIL("expected a FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line() == 1);
      CHECK(std::string(e.what()).find(kInstanceTag) != std::string::npos);
    }

    std::stringstream truncated(std::string(kInstanceTag) + "\n3 2 diag\n1 0 0\n");
    try {
      read_instance(truncated);
      FAIL("expected a FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line() == 4);
    }

    std::stringstream bad_number(std::string(kInstanceTag) + "\n2 1 diag\n1 x\n");
    try {
      read_instance(bad_number);
      FAIL("expected a FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line() == 3);
    }

    std::stringstream bad_kind(std::string(kInstanceTag) + "\n2 1 sparse\n");
    CHECK_THROWS_AS(read_instance(bad_kind), FormatError);
  }
}
