#include "reference.hpp"

#include "scfw/barrier.hpp"
#include "scfw/instances.hpp"

#include <doctest.h>

#include <limits>

using namespace scfw;

TEST_SUITE("barrier") {
  TEST_CASE("omega") {
    CHECK(omega(0.0) == 0.0);
    CHECK(omega(0.5) == doctest::Approx(static_cast<double>(ref::omega(0.5L))).epsilon(1e-15));
    CHECK(omega(0.5) == doctest::Approx(0.19314718056).epsilon(1e-10));
    CHECK(omega(1.0) == std::numeric_limits<double>::infinity());
    CHECK(omega(2.0) == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("omega_star") {
    CHECK(omega_star(0.0) == 0.0);
    CHECK(omega_star(1.0) == doctest::Approx(static_cast<double>(ref::omega_star(1.0L))).epsilon(1e-15));
    CHECK(omega_star(1.0) == doctest::Approx(0.30685281944).epsilon(1e-10));
    CHECK(omega_star(-1.0) == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("omega and omega_star are nonnegative and vanish only at zero") {
    for (int k = -999; k < 1000; ++k) {
      const double a = k / 1000.0;
      CHECK(omega(a) >= 0.0);
      CHECK(omega_star(a) >= 0.0);
      if (k != 0) {
        CHECK(omega(a) > 0.0);
        CHECK(omega_star(a) > 0.0);
      }
    }
  }

  TEST_CASE("lower bounds on omega_star used by the descent estimate") {
    for (int k = 0; k <= 10000; ++k) {
      const double small = 0.5 * k / 10000.0;
      CHECK(omega_star(small) >= small * small / 3.0 - 1e-15);
      const double large = 0.5 + 1000.0 * k / 10000.0;
      CHECK(omega_star(large) >= large / 5.3);
    }
  }

  TEST_CASE("f_value") {
    CHECK(f_value(Vector::Ones(4)) == 0.0);
    CHECK(f_value(Vector{{0.25, 0.5}}) == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(f_value(Vector{{1.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(f_value(Vector{{1.0, -2.0}}), DomainError);
  }

  TEST_CASE("logarithmic homogeneity and Euler identity") {
    Rng rng(3);
    const Vector v = gaussian_vector(9, rng).cwiseAbs() + Vector::Constant(9, 0.1);
    for (double c : {0.01, 0.5, 3.0, 1e4}) {
      const double lhs = f_value(Vector(c * v));
      const double rhs = f_value(v) - 9.0 * std::log(c);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    CHECK(f_gradient(v).dot(v) == doctest::Approx(-9.0).epsilon(1e-15));
  }

  TEST_CASE("approx_gap") {
    const Vector v{{1.0, 1.0}};
    CHECK(approx_gap(v, v) == 0.0);
    CHECK(approx_gap(v, Vector{{2.0, 3.0}}) == 3.0);
  }

  TEST_CASE("hessian_distance") {
    const Vector v{{1.0, 1.0}};
    CHECK(hessian_distance(v, v) == 0.0);
    CHECK(hessian_distance(v, Vector{{2.0, 3.0}}) == doctest::Approx(std::sqrt(5.0)));
  }

  TEST_CASE("v-space gap and distance agree with their matrix forms") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
      const Index n = 6, d = 5;
      std::vector<Matrix> blocks;
      for (Index i = 0; i < d; ++i) blocks.push_back(ref::random_psd(n, rng));
      const Instance inst(n, MatrixKind::kDense, blocks);
      Matrix x = ref::random_psd(n, rng);
      x /= x.trace();
      Rng r2(trial);
      const Vector u = random_unit_vector(n, r2);
      const Vector v = ref::apply_map(inst, x);
      const Vector w = ref::quad_forms(inst, u);

      // <grad f(B x), B(x - h)> = <J, h> - <J, x> with J = sum A_i / v_i.
      const Matrix j = ref::gradient_matrix(inst, v);
      const double matrix_gap = u.dot(j * u) - (j.cwiseProduct(x)).sum();
      CHECK(approx_gap(v, w) == doctest::Approx(matrix_gap).epsilon(1e-10));

      const Matrix hess = v.array().square().inverse().matrix().asDiagonal();
      const double matrix_dist = std::sqrt((w - v).dot(hess * (w - v)));
      CHECK(hessian_distance(v, w) == doctest::Approx(matrix_dist).epsilon(1e-10));
    }
  }

  TEST_CASE("rescale_to_standard") {
    const BarrierParams id = rescale_to_standard(7.0, 2.0);
    CHECK(id.theta == 7.0);
    CHECK(id.scale == 1.0);
    CHECK(id.M == 2.0);
    const BarrierParams p = rescale_to_standard(4.0, 4.0);
    CHECK(p.theta == 16.0);
    CHECK(p.scale == 4.0);
    CHECK_THROWS_AS(rescale_to_standard(1.0, 2.0 / std::sqrt(4.0)), ConfigError);
    CHECK_THROWS_AS(rescale_to_standard(0.5, 2.0), ConfigError);
  }

  TEST_CASE("initial_gap_bound") {
    Matrix big = Matrix::Ones(500, 1);
    std::vector<Matrix> blocks(50, big);
    const Instance inst(500, MatrixKind::kDiag, blocks);
    CHECK(initial_gap_bound(inst).bound == doctest::Approx(310.73).epsilon(1e-4));

    const Instance single(1, MatrixKind::kDiag, {Matrix::Ones(1, 1)});
    CHECK(initial_gap_bound(single).bound == 0.0);

    const InitialGapBound g = initial_gap_bound(gen_diag(4, 2));
    CHECK(g.f_initial == doctest::Approx(3.0 * std::log(2.0)));
    CHECK(g.dual_lower == doctest::Approx(-std::log(2.0)));
    CHECK(g.f_initial - g.dual_lower == doctest::Approx(2.0 * std::log(4.0)));
    CHECK(g.f_initial - g.dual_lower == doctest::Approx(g.bound));
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((BarrierParams{0.5, 2.0, 0.0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((BarrierParams{2.0, 2.0, -1.0, 1.0}.validate()), ConfigError);
    CHECK_NOTHROW(log_barrier_params(3).validate());
    CHECK(log_barrier_params(3).gap_threshold() == 3.0);
  }
}
