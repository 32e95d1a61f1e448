#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nkcert/error.hpp"
#include "nkcert/problem.hpp"

using namespace nkcert;

namespace {

Vector random_point_in_ball(const Vector& x0, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector x = x0;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += radius * u(rng);
  return x;
}

}  // namespace

TEST_CASE("builtin registry") {
  const auto names = builtin_names();
  for (const char* required : {"scalar-sqrt2", "scalar-exp", "2d-quadratic", "affine"}) {
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  }
  CHECK_THROWS_AS(load_builtin("no-such"), UnknownProblem);
}

TEST_CASE("scalar-sqrt2 at x0 = 1.4") {
  const auto b = load_builtin("scalar-sqrt2", {Vector{1.4}, std::nullopt});
  REQUIRE(b.analytic_l0);
  CHECK(*b.analytic_l0 == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  // |1.96 - 2| / 2.8
  CHECK(eta_of(b.system) == doctest::Approx(1.0 / 70.0).epsilon(1e-14));
  // 1.5 - (2.25 - 2) / 3
  CHECK(newton_step(b.system, Vector{1.5})[0] == doctest::Approx(1.5 - 0.25 / 3.0).epsilon(1e-15));
}

TEST_CASE("2d-quadratic eta by Cramer's rule") {
  const auto b = load_builtin("2d-quadratic");
  const double x1 = b.system.x0()[0], x2 = b.system.x0()[1];
  const double f1 = x1 * x1 + x1 * x2 - 3, f2 = x2 * x2 - x1 - 3;
  const double a = 2 * x1 + x2, bb = x1, c = -1, d = 2 * x2;
  const double det = a * d - bb * c;
  const double s1 = (f1 * d - bb * f2) / det, s2 = (a * f2 - c * f1) / det;
  CHECK(eta_of(b.system) == doctest::Approx(std::max(std::abs(s1), std::abs(s2))).epsilon(1e-14));
}

TEST_CASE("affine systems: one Newton step is exact") {
  const auto b = load_builtin("affine");
  const Vector x1 = newton_step(b.system, b.system.x0());
  CHECK(norm_inf(b.system.residual(x1)) <= 1e-12);
  CHECK(eta_of(b.system) == doctest::Approx(1.0).epsilon(1e-14));  // ||x0 - c|| with c = (1, -1, 0.5)
  CHECK(eval_modulus(b.analytic_modulus, 1.3) == 0.0);
}

TEST_CASE("eta_of equals the first Newton step length") {
  for (const auto& name : builtin_names()) {
    const auto b = load_builtin(name);
    const double step = norm_inf(newton_step(b.system, b.system.x0()) - b.system.x0());
    CHECK(std::abs(eta_of(b.system) - step) <= 1e-14);
  }
}

TEST_CASE("shipped moduli bound the centered Jacobian deviation") {
  std::mt19937_64 rng(99);
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto b = load_builtin(name);
    const LuFactorization j0(b.system.jacobian(b.system.x0()));
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = random_point_in_ball(b.system.x0(), b.system.radius(), rng);
      const double r = norm_inf(x - b.system.x0());
      CHECK(centered_deviation(b.system, j0, x) <= eval_modulus(b.analytic_modulus, r) + 1e-9);
    }
  }
}

TEST_CASE("builtin Lipschitz constants dominate sampled difference quotients") {
  std::mt19937_64 rng(5);
  for (const auto& name : builtin_names()) {
    const auto b = load_builtin(name);
    if (!b.analytic_l) continue;
    CAPTURE(name);
    const LuFactorization j0(b.system.jacobian(b.system.x0()));
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = random_point_in_ball(b.system.x0(), b.system.radius(), rng);
      const Vector y = random_point_in_ball(b.system.x0(), b.system.radius(), rng);
      const double dev = operator_norm_inf(j0.solve(b.system.jacobian(x) - b.system.jacobian(y)));
      CHECK(dev <= *b.analytic_l * norm_inf(x - y) + 1e-9);
    }
  }
}

TEST_CASE("newton_step at a critical point") {
  auto sys = NonlinearSystem::from_expressions("square", {"x1^2"}, Vector{1.0}, 2.0);
  CHECK_THROWS_AS(newton_step(sys, Vector{0.0}), SingularMatrix);
  CHECK(newton_step(sys, Vector{1.0})[0] == 0.5);
}

TEST_CASE("eta vanishes at a root") {
  auto sys = NonlinearSystem::from_expressions("root", {"x1^2 - 4"}, Vector{2.0}, 1.0);
  CHECK(eta_of(sys) == 0.0);
}

TEST_CASE("domain and dimension errors") {
  const auto b = load_builtin("scalar-sqrt2");
  CHECK_THROWS_AS(newton_step(b.system, Vector{10.0}), OutOfDomain);
  CHECK_THROWS_AS(b.system.residual(Vector{1.0, 2.0}), InvalidArgument);
  CHECK(b.system.in_domain(b.system.x0()));
  CHECK_FALSE(b.system.in_domain(Vector{5.0}));
  CHECK_THROWS_AS(load_builtin("scalar-sqrt2", {Vector{1.0, 1.0}, std::nullopt}), InvalidArgument);
}

TEST_CASE("expression-defined systems") {
  auto sys = NonlinearSystem::from_expressions("circle", {"x1^2 + x2^2 - 4", "x1 - x2"}, Vector{1.5, 1.5}, 1.0);
  const Matrix j = sys.jacobian(Vector{1.0, 2.0});
  CHECK(j(0, 0) == 2.0);
  CHECK(j(0, 1) == 4.0);
  CHECK(j(1, 0) == 1.0);
  CHECK(j(1, 1) == -1.0);
  Vector x = sys.x0();
  for (int k = 0; k < 8; ++k) x = newton_step(sys, x);
  CHECK(x[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(NonlinearSystem::from_expressions("bad", {"x1"}, Vector{1.0, 1.0}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(NonlinearSystem::from_expressions("flat", {"x1^2"}, Vector{0.0}, 1.0), SingularMatrix);
  CHECK_THROWS_AS(NonlinearSystem::from_expressions("r", {"x1"}, Vector{0.0}, 0.0), InvalidArgument);
}
