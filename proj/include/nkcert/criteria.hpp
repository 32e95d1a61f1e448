#pragma once

// Convergence certificates: the classical Kantorovich test, the
// first-integral fixed-point condition, and the two-restriction Argyros test.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nkcert/majorant.hpp"
#include "nkcert/modulus.hpp"

namespace nkcert {

namespace thresholds {
/// Smallest root of (l0 eta)^2 - 6 l0 eta + 1 = 0.
inline const double kNewCondition = 3.0 - 2.0 * std::sqrt(2.0);
inline const double kKantorovich = 0.5;
inline constexpr double kArgyros = 0.1;
/// Reference value quoted for an earlier variant of the Argyros argument;
/// reported, never derived.
inline const double kArgyrosEarlier = (2.0 - std::sqrt(3.0)) / 2.0;
/// Below this l0/l ratio the new condition admits larger eta than Kantorovich.
inline const double kCriticalRatio = 6.0 - 4.0 * std::sqrt(2.0);
/// Boundary slack for every "<= threshold" test.
inline constexpr double kBoundarySlack = 1e-15;
}  // namespace thresholds

enum class Criterion { Kantorovich, NewCondition, Argyros };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

struct Certificate {
  Criterion criterion = Criterion::NewCondition;
  bool passed = false;
  double eta = 0.0;
  double eta_max = 0.0;  // may be +inf for a constant Jacobian
  std::optional<double> v_star;
  /// Built on a sampled (lower-estimate) modulus.
  bool heuristic = false;
  std::vector<std::pair<std::string, double>> diagnostics;

  std::optional<double> diagnostic(const std::string& name) const;
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct ComparisonVerdict {
  double ratio = 0.0;  // l0 / l
  double critical_ratio = thresholds::kCriticalRatio;
  bool new_weaker_than_kantorovich = false;
  friend bool operator==(const ComparisonVerdict&, const ComparisonVerdict&) = default;
};

struct Comparison {
  ComparisonVerdict verdict;
  std::vector<Certificate> certificates;  // Kantorovich, NewCondition, Argyros
  std::vector<std::pair<std::string, double>> diagnostics;
};

/// Passes iff l eta <= 1/2; v* is the smaller root of eta - v + l v^2 / 2.
Certificate check_kantorovich(const LipschitzPair& pair, double eta);

/// Closed form for omega0(r) = l0 r: passes iff l0 eta <= 3 - 2 sqrt(2) and
/// the smaller root of 2 l0 v^2 - (1 + l0 eta) v + eta = 0 lies in [0, R].
Certificate check_new_lipschitz(const LipschitzPair& pair, double eta, double radius);

/// Passes iff psi has a minimal fixed point with eta < v* <= R (or the
/// degenerate eta == 0 / v* == eta case).
Certificate check_new_general(const MajorantModel& model);

/// Fixed point r0 of f(v) = gamma(v) (int_0^v omega0 + omega0(v) v + eta)
/// in ]0, R] plus q(r0) = 2 omega0(r0) / (1 - omega0(r0)) < 1.
Certificate check_argyros(const MajorantModel& model);

/// f itself, exposed for comparison against psi.
double argyros_majorant(const MajorantModel& model, double v);

/// Runs all three criteria on a linear modulus. Requires l > 0.
Comparison compare_criteria(const LipschitzPair& pair, double eta, double radius);

/// Largest eta in [0, R] for which the general new condition passes.
///
/// psi(v) <= v exactly when eta <= v - 2 gamma(v) int_0^v omega0, and any
/// such v bounds the minimal fixed point, so this is the maximum of the
/// right-hand side over [0, R] below saturation.
double new_condition_eta_max(const ContinuityModulus& modulus, double radius);

/// Largest eta in [0, R] for which the general Argyros test passes: the
/// maximum of v - 2 omega0(v) v - int_0^v omega0 over the v in [0, R] with
/// omega0(v) < 1/3.
double argyros_eta_max(const ContinuityModulus& modulus, double radius);

}  // namespace nkcert
