#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "generators.hpp"
#include "nkcert/criteria.hpp"
#include "nkcert/error.hpp"

using namespace nkcert;
using nkcert::testing::uniform;

namespace {

const double kNew = 3.0 - 2.0 * std::sqrt(2.0);
const double kRatio = 6.0 - 4.0 * std::sqrt(2.0);

// Minimal root of v - psi(v) on [0, R] for a power modulus, by scanning for the
// first sign change and bisecting it. Independent of the library's psi.
std::optional<double> power_fixed_point(double c, double p, double eta, double radius) {
  auto g = [&](double v) {
    const double w = c * std::pow(v, p);
    if (w >= 1.0) return -std::numeric_limits<double>::infinity();
    const double integral = c * std::pow(v, p + 1) / (p + 1);
    return v - (eta + 2.0 * integral / (1.0 - w));
  };
  const int n = 20000;
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double v = radius * i / n;
    if (g(v) >= 0.0) {
      double lo = prev, hi = v;
      for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? hi : lo) = mid;
      }
      return hi;
    }
    prev = v;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("threshold ordering") {
  CHECK(thresholds::kNewCondition == doctest::Approx(0.17157287525381).epsilon(1e-12));
  CHECK(thresholds::kArgyrosEarlier == doctest::Approx(0.13397459621556).epsilon(1e-12));
  CHECK(thresholds::kCriticalRatio == doctest::Approx(0.34314575050762).epsilon(1e-12));
  CHECK(thresholds::kNewCondition > thresholds::kArgyrosEarlier);
  CHECK(thresholds::kArgyrosEarlier > thresholds::kArgyros);
}

TEST_CASE("criterion names round-trip") {
  for (auto c : {Criterion::Kantorovich, Criterion::NewCondition, Criterion::Argyros}) {
    CHECK(criterion_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(criterion_from_string("newton"), ParseError);
}

TEST_CASE("Kantorovich examples") {
  const auto at = check_kantorovich(LipschitzPair(1, 1), 0.5);
  CHECK(at.passed);
  CHECK(*at.v_star == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(check_kantorovich(LipschitzPair(1, 1), 0.51).passed);
  const auto zero = check_kantorovich(LipschitzPair(1, 1), 0.0);
  CHECK(zero.passed);
  CHECK(*zero.v_star == 0.0);
  CHECK(check_kantorovich(LipschitzPair(0, 2), 0.1).eta_max == 0.25);
  CHECK(std::isinf(check_kantorovich(LipschitzPair(0, 0), 0.1).eta_max));
  CHECK_THROWS_AS(check_kantorovich(LipschitzPair(1, 1), -0.1), InvalidArgument);
}

TEST_CASE("new condition, Lipschitz examples") {
  const auto at = check_new_lipschitz(LipschitzPair(1, 1), kNew, 1);
  CHECK(at.passed);
  CHECK(std::abs(*at.diagnostic("discriminant")) <= 1e-15);
  CHECK(at.eta_max == doctest::Approx(kNew).epsilon(1e-15));
  CHECK_FALSE(check_new_lipschitz(LipschitzPair(1, 1), 0.2, 1).passed);
  const auto zero = check_new_lipschitz(LipschitzPair(1, 1), 0.0, 1);
  CHECK(zero.passed);
  CHECK(*zero.v_star == 0.0);
  // v* must also fit in the ball: l0 = 1, eta = 0.1 gives v* ~ 0.1127.
  CHECK_FALSE(check_new_lipschitz(LipschitzPair(1, 1), 0.1, 0.11).passed);
}

TEST_CASE("new condition, general path examples") {
  const auto affine = check_new_general(MajorantModel(ContinuityModulus::linear(0), 0.3, 1));
  CHECK(affine.passed);
  CHECK(*affine.v_star == 0.3);
  CHECK(*affine.diagnostic("degenerate") == 1.0);

  CHECK_FALSE(power_fixed_point(1, 0.5, 0.5, 1));
  CHECK_FALSE(check_new_general(MajorantModel(ContinuityModulus::power(1, 0.5), 0.5, 1)).passed);

  const auto oracle = power_fixed_point(1, 0.5, 0.01, 1);
  REQUIRE(oracle);
  const auto c = check_new_general(MajorantModel(ContinuityModulus::power(1, 0.5), 0.01, 1));
  CHECK(c.passed);
  CHECK(std::abs(*c.v_star - *oracle) <= 1e-10);
}

TEST_CASE("Argyros examples") {
  const auto at = check_argyros(MajorantModel(ContinuityModulus::linear(1), 0.1, 1));
  CHECK(at.passed);
  CHECK(std::abs(*at.diagnostic("discriminant")) <= 1e-15);
  CHECK_FALSE(check_argyros(MajorantModel(ContinuityModulus::linear(1), 0.11, 1)).passed);
  const auto affine = check_argyros(MajorantModel(ContinuityModulus::linear(0), 0.3, 1));
  CHECK(affine.passed);
  CHECK(*affine.v_star == 0.3);
  CHECK(*affine.diagnostic("q(r0)") == 0.0);
}

TEST_CASE("comparison examples") {
  CHECK(compare_criteria(LipschitzPair(0.3, 1), 0.1, 10).verdict.new_weaker_than_kantorovich);
  CHECK_FALSE(compare_criteria(LipschitzPair(1, 1), 0.1, 10).verdict.new_weaker_than_kantorovich);
  CHECK_FALSE(compare_criteria(LipschitzPair(kRatio, 1), 0.1, 10).verdict.new_weaker_than_kantorovich);
  CHECK_THROWS_AS(compare_criteria(LipschitzPair(0, 0), 0.1, 10), InvalidArgument);
  const auto cmp = compare_criteria(LipschitzPair(0.5, 1), 0.1, 10);
  REQUIRE(cmp.certificates.size() == 3);
  CHECK(cmp.certificates[0].criterion == Criterion::Kantorovich);
  CHECK(cmp.certificates[1].criterion == Criterion::NewCondition);
  CHECK(cmp.certificates[2].criterion == Criterion::Argyros);
}

TEST_CASE("property: closed-form criteria pass iff eta <= eta_max, and passing gives eta <= v*") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const double l = uniform(rng, 0.1, 4.0);
    const double l0 = l * uniform(rng, 0.0, 1.0);
    const double radius = uniform(rng, 0.05, 5.0);
    const double eta = uniform(rng, 0.0, radius);
    const LipschitzPair pair(l0, l);
    for (const auto& c : {check_kantorovich(pair, eta), check_new_lipschitz(pair, eta, radius)}) {
      CHECK(c.passed == (eta <= c.eta_max + 1e-15));
      if (c.passed) {
        REQUIRE(c.v_star);
        CHECK(eta <= *c.v_star);
      }
    }
  }
}

TEST_CASE("property: general and closed-form new condition agree on linear moduli") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const double l0 = uniform(rng, 0.05, 5.0);
    const double radius = uniform(rng, 0.05, 3.0) / l0;
    const double eta = uniform(rng, 0.0, std::min(radius, 0.25 / l0));
    // Keep clear of the tangency where the iteration cannot resolve 1e-10.
    if (std::abs(l0 * eta - kNew) < 1e-3) continue;
    const auto closed = check_new_lipschitz(LipschitzPair(l0, l0), eta, radius);
    const auto general = check_new_general(MajorantModel(ContinuityModulus::linear(l0), eta, radius));
    CAPTURE(l0);
    CAPTURE(eta);
    CAPTURE(radius);
    if (closed.v_star && std::abs(*closed.v_star - radius) < 1e-9) continue;  // v* on the sphere
    CHECK(closed.passed == general.passed);
    if (closed.passed && general.passed) CHECK(std::abs(*closed.v_star - *general.v_star) <= 1e-10);
  }
}

TEST_CASE("property: numerical eta_max matches the closed forms on linear moduli") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const double l0 = uniform(rng, 0.2, 3.0);
    const double radius = uniform(rng, 0.05, 2.0) / l0;
    const auto m = ContinuityModulus::linear(l0);
    const double closed_new = check_new_lipschitz(LipschitzPair(l0, l0), 0.0, radius).eta_max;
    CHECK(std::abs(new_condition_eta_max(m, radius) - closed_new) <= 1e-8);
    const double closed_argyros = check_argyros(MajorantModel(m, 0.0, radius)).eta_max;
    CHECK(std::abs(argyros_eta_max(m, radius) - closed_argyros) <= 1e-8);
  }
}

TEST_CASE("property: f dominates psi") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    const auto mod = nkcert::testing::random_modulus(rng);
    double radius = std::min(mod.max_radius(), 2.0);
    while (eval_modulus(mod, radius) >= 0.9) radius *= 0.5;
    const double eta = trial % 5 == 0 ? 0.0 : uniform(rng, 0.0, radius);
    const MajorantModel m(mod, eta, radius);
    for (int i = 0; i <= 200; ++i) {
      const double v = radius * i / 200;
      const double f = argyros_majorant(m, v), p = psi(m, v);
      CHECK(f >= p - 1e-12);
      if (eta > 0 && v > 0) CHECK(f > p);
    }
  }
}

TEST_CASE("property: Argyros pass implies new-condition pass with a finer ball") {
  std::mt19937_64 rng(45);
  int passes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto mod = nkcert::testing::random_modulus(rng);
    const double radius = std::min(mod.max_radius(), uniform(rng, 0.1, 2.0));
    const double eta = uniform(rng, 0.0, 0.2) * radius;
    const MajorantModel m(mod, eta, radius);
    const auto a = check_argyros(m);
    if (!a.passed) continue;
    ++passes;
    const auto n = check_new_general(m);
    CHECK(n.passed);
    if (n.passed) CHECK(*n.v_star <= *a.v_star + 1e-9);
  }
  CHECK(passes > 20);
}
