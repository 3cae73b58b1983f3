#include "reference.hpp"

#include "scfw/instances.hpp"
#include "scfw/sampling.hpp"
#include "scfw/solver.hpp"

#include <doctest.h>

using namespace scfw;

namespace {

// A fixed chain of unit directions and step sizes, with a few stays mixed in.
std::vector<ChainStep> fixed_chain(Index n, int steps, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 0.6);
  std::vector<ChainStep> chain;
  for (int k = 0; k < steps; ++k) {
    ChainStep s;
    if (k % 4 != 3) s.u = random_unit_vector(n, rng);
    s.gamma = s.u ? unif(rng) : 0.0;
    chain.push_back(std::move(s));
  }
  return chain;
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("init_samples has covariance I/n") {
    const Index n = 5;
    const long reps = 40000;
    Rng rng(3);
    Matrix acc = Matrix::Zero(n, n);
    for (long r = 0; r < reps; ++r) {
      const Vector z = init_samples(n, rng);
      acc += z * z.transpose();
    }
    acc /= static_cast<double>(reps);
    // Entry standard errors are at most sqrt(2)/n/sqrt(reps).
    const double se = std::sqrt(2.0) / n / std::sqrt(static_cast<double>(reps));
    CHECK((acc - Matrix::Identity(n, n) / n).cwiseAbs().maxCoeff() <= 5.0 * se);
  }

  TEST_CASE("init_samples is reproducible from the stream") {
    Rng a = make_stream(9, Stream::kSampling), b = make_stream(9, Stream::kSampling);
    CHECK(init_samples(7, a) == init_samples(7, b));
    Rng c = make_stream(10, Stream::kSampling);
    Rng d = make_stream(9, Stream::kSampling);
    CHECK(init_samples(7, c) != init_samples(7, d));
  }

  TEST_CASE("update_sample endpoints") {
    const Vector z{{0.3, -0.2, 0.9}};
    const Vector u = Vector::Unit(3, 1);
    Rng rng(1);
    CHECK(update_sample(z, u, 0.0, rng) == z);
    CHECK(update_sample_with(z, u, 1.0, 0.7) == 0.7 * u);
    CHECK(update_sample_with(z, u, 0.25, 2.0).isApprox(std::sqrt(0.75) * z + u));
    CHECK_THROWS_AS(update_sample_with(z, u, -0.1, 1.0), ConfigError);
  }

  TEST_CASE("replica covariance tracks X_t at n = 2") {
    const Index n = 2;
    const auto chain = fixed_chain(n, 12, 4);
    const long reps = 100000;
    const Matrix emp = replica_covariance(n, chain, reps, 77);
    const Matrix x = tracked_covariance(n, chain);
    // Var(z_a z_b) = X_aa X_bb + X_ab^2 for a Gaussian z.
    double var = 0.0;
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) var += x(a, a) * x(b, b) + x(a, b) * x(a, b);
    const double se = std::sqrt(var / static_cast<double>(reps));
    CHECK((emp - x).norm() <= 5.0 * se);
    CHECK(x.trace() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("sampling and matrix modes produce identical scalar traces") {
    const Instance inst = gen_diag(30, 6);
    for (Variant variant : {Variant::kApproxI, Variant::kApproxII, Variant::kExact}) {
      for (InitKind init : {InitKind::kIdentity, InitKind::kRandom}) {
        SolverConfig cfg;
        cfg.variant = variant;
        cfg.init = init;
        cfg.seed = 11;
        const SolveResult m = solve(inst, log_barrier_params(6), cfg);
        cfg.mode = IterateMode::kSampling;
        auto oracle = make_oracle(cfg);
        const SolveResult s = run_sampling_mode(inst, log_barrier_params(6), cfg, *oracle);
        REQUIRE(m.K == s.K);
        for (std::size_t t = 0; t < m.trace.size(); ++t) {
          CHECK(m.trace[t].delta_t == s.trace[t].delta_t);
          CHECK(m.trace[t].g_approx == s.trace[t].g_approx);
          CHECK(m.trace[t].d_t == s.trace[t].d_t);
          CHECK(m.trace[t].gamma_t == s.trace[t].gamma_t);
        }
        CHECK(m.v == s.v);
        CHECK(m.x.has_value());
        CHECK(s.z.has_value());
        CHECK_FALSE(s.x.has_value());
      }
    }
  }

  TEST_CASE("the sample stays finite and of order one") {
    const Instance inst = gen_diag(40, 8);
    SolverConfig cfg;
    cfg.mode = IterateMode::kSampling;
    cfg.seed = 5;
    const SolveResult res = solve(inst, log_barrier_params(8), cfg);
    REQUIRE(res.z);
    CHECK(res.z->allFinite());
    CHECK(res.z->norm() < 10.0);
  }
}
