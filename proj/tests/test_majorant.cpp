#include <doctest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "nkcert/error.hpp"
#include "nkcert/majorant.hpp"

using namespace nkcert;
using nkcert::testing::uniform;

namespace {

const double kCritical = 3.0 - 2.0 * std::sqrt(2.0);

ContinuityModulus zero() { return ContinuityModulus::linear(0.0); }
ContinuityModulus lin(double l0) { return ContinuityModulus::linear(l0); }

// Smaller root of 2 l0 v^2 - (1 + l0 eta) v + eta by bisection on [0, vertex].
double quadratic_root_by_bisection(double l0, double eta) {
  auto f = [&](double v) { return 2 * l0 * v * v - (1 + l0 * eta) * v + eta; };
  double lo = 0.0, hi = (1 + l0 * eta) / (4 * l0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(MajorantModel(lin(1), -0.1, 1), InvalidArgument);
  CHECK_THROWS_AS(MajorantModel(lin(1), 0.5, 0.4), InvalidArgument);
  CHECK_THROWS_AS(MajorantModel(lin(1), 0.1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(MajorantModel(ContinuityModulus::table({{0, 0}, {1, 0.1}}), 0.1, 2.0), InvalidArgument);
}

TEST_CASE("gamma") {
  CHECK(gamma(MajorantModel(zero(), 0.1, 1), 0.7) == 1.0);
  CHECK(gamma(MajorantModel(lin(1), 0.1, 1), 0.5) == 2.0);
  CHECK_THROWS_AS(gamma(MajorantModel(lin(1), 0.1, 1), 1.0), ModulusSaturated);
}

TEST_CASE("psi") {
  const MajorantModel m(lin(1), 0.1, 1);
  CHECK(psi(m, 0.0) == 0.1);
  CHECK(psi(m, 0.2) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(psi(MajorantModel(zero(), 0.3, 1), 0.8) == 0.3);
  // Generic formula through a power modulus with p = 1 agrees with the linear closed form.
  const MajorantModel p(ContinuityModulus::power(1.0, 1.0), 0.1, 1);
  CHECK(psi(p, 0.2) == doctest::Approx(0.15).epsilon(1e-14));
}

TEST_CASE("majorant sequence: degenerate eta = 0") {
  const auto seq = majorant_sequence(MajorantModel(lin(1), 0.0, 1));
  CHECK(seq.status == SequenceStatus::Converged);
  REQUIRE(seq.v_star);
  CHECK(*seq.v_star == 0.0);
  CHECK(seq.values == std::vector<double>{0.0});
}

TEST_CASE("majorant sequence at the critical eta") {
  // D = 0: double root (1 + eta) / 4. Convergence is sublinear there, so v*
  // is located after the plain recurrence stalls and is good to ~1e-7.
  const MajorantModel m(lin(1), kCritical, 1);
  const auto seq = majorant_sequence(m);
  CHECK(seq.status == SequenceStatus::Converged);
  REQUIRE(seq.v_star);
  CHECK(*seq.v_star == doctest::Approx((1 + kCritical) / 4).epsilon(1e-6));
  CHECK(std::abs(*seq.v_star - psi(m, *seq.v_star)) <= 1e-12 * std::max(1.0, *seq.v_star));
}

TEST_CASE("just past the critical eta there is no fixed point") {
  CHECK_FALSE(minimal_fixed_point(MajorantModel(lin(1), kCritical + 1e-6, 1)));
  CHECK_FALSE(minimal_fixed_point(MajorantModel(lin(1), kCritical * (1 + 1e-9), 1)));
  CHECK(minimal_fixed_point(MajorantModel(lin(1), kCritical * (1 - 1e-9), 1)));
}

TEST_CASE("majorant sequence without a fixed point") {
  const auto seq = majorant_sequence(MajorantModel(lin(1), 0.2, 1));
  CHECK((seq.status == SequenceStatus::ExceededRadius || seq.status == SequenceStatus::IterationCapped ||
         seq.status == SequenceStatus::ModulusSaturated));
  CHECK_FALSE(seq.v_star);
  CHECK_FALSE(minimal_fixed_point(MajorantModel(lin(1), 0.5, 1)));
}

TEST_CASE("minimal fixed point examples") {
  for (double eta : {0.01, 0.05, 0.1, 0.15, 0.17}) {
    const auto fp = minimal_fixed_point(MajorantModel(lin(1), eta, 1));
    REQUIRE(fp);
    CHECK_FALSE(fp->degenerate);
    const double d = eta * eta - 6 * eta + 1;
    CHECK(fp->value == doctest::Approx(((1 + eta) - std::sqrt(d)) / 4).epsilon(1e-10));
  }
  const auto affine = minimal_fixed_point(MajorantModel(zero(), 0.3, 1));
  REQUIRE(affine);
  CHECK(affine->value == 0.3);
  CHECK(affine->degenerate);
}

TEST_CASE("omega bound and majorant examples") {
  const MajorantModel m(lin(1), 0.1, 1);
  // gamma(0.2) = 1.25; int_0.2^0.3 l dl = 0.025; omega0(0.2) * 0.1 = 0.02.
  CHECK(omega_bound(m, 0.1, 0.2, 0.2) == doctest::Approx(1.25 * (0.025 + 0.02)).epsilon(1e-14));
  CHECK(omega_bound(m, 0.0, 0.3, 0.2) == 0.0);
  CHECK(omega_bound(MajorantModel(zero(), 0.1, 1), 0.2, 0.5, 0.1) == 0.0);
  CHECK(omega_majorant(m, 0.0, 0.2, 0.2) == 0.0);
  CHECK(omega_majorant(MajorantModel(zero(), 0.1, 1), 0.2, 0.5, 0.1) == 0.0);
  CHECK(omega_majorant(m, 0.1, 0.3, 0.2) == doctest::Approx(psi(m, 0.3) - psi(m, 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(omega_bound(m, 0.1, 0.1, 0.2), InvalidArgument);
  CHECK_THROWS_AS(omega_bound(m, 0.9, 0.3, 0.2), InvalidArgument);
}

TEST_CASE("Rheinboldt sequence examples") {
  const auto flat = rheinboldt_sequence(MajorantModel(zero(), 0.3, 1));
  REQUIRE(flat.values.size() >= 2);
  for (std::size_t k = 1; k < flat.values.size(); ++k) CHECK(flat.values[k] == 0.3);
  const auto still = rheinboldt_sequence(MajorantModel(lin(1), 0.0, 1));
  for (double u : still.values) CHECK(u == 0.0);
}

TEST_CASE("property: Lipschitz fixed point matches a bisection oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const double l0 = uniform(rng, 0.1, 5.0);
    const double x = uniform(rng, 1e-4, kCritical - 1e-3);
    const double eta = x / l0;
    const MajorantModel m(lin(l0), eta, 1.0 / l0);
    const auto fp = minimal_fixed_point(m);
    REQUIRE(fp);
    CHECK(std::abs(fp->value - quadratic_root_by_bisection(l0, eta)) <= 1e-10);
  }
}

TEST_CASE("property: sequences are monotone, bounded by v*, and never saturate") {
  std::mt19937_64 rng(32);
  int converged = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto mod = nkcert::testing::random_modulus(rng);
    const double radius = std::min(mod.max_radius(), uniform(rng, 0.1, 2.0));
    const double eta = uniform(rng, 0.0, 0.3) * radius;
    const MajorantModel m(mod, eta, radius);
    const auto seq = majorant_sequence(m);
    for (std::size_t k = 1; k < seq.values.size(); ++k) CHECK(seq.values[k] >= seq.values[k - 1]);
    if (seq.status != SequenceStatus::Converged) continue;
    ++converged;
    const double vs = *seq.v_star;
    for (double v : seq.values) CHECK(v <= vs + 1e-14 * std::max(1.0, vs));
    CHECK(std::abs(vs - psi(m, vs)) <= 1e-12 * std::max(1.0, vs));
    CHECK(eval_modulus(mod, vs) < 1.0);
    if (eta > 0) CHECK(vs > eta);
    CHECK(vs <= radius);
  }
  CHECK(converged > 50);
}

TEST_CASE("property: psi is non-decreasing") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const auto mod = nkcert::testing::random_modulus(rng);
    const double radius = std::min(mod.max_radius(), 2.0);
    const MajorantModel m(mod, uniform(rng, 0.0, radius), radius);
    // Stay below saturation.
    double top = radius;
    while (eval_modulus(mod, top) >= 0.9) top *= 0.5;
    double a = uniform(rng, 0.0, top), b = uniform(rng, 0.0, top);
    if (a > b) std::swap(a, b);
    CHECK(psi(m, a) <= psi(m, b) + 1e-12);
  }
}
