#pragma once

// Scalar majorant machinery for Newton's method under a centered modulus:
//
//   gamma(s)     = 1 / (1 - omega0(s))
//   psi(v)       = eta + 2 gamma(v) * int_0^v omega0
//   v_{k+1}      = psi(v_k),  v_0 = 0, v_1 = eta
//   Omega(t,s,r) = gamma(s) * (int_r^{r+t} omega0 + omega0(r) t)
//   Omega_bar    = 2 gamma(s) int_0^{r+t} omega0 - 2 gamma(r) int_0^r omega0
//   u_{k+1}      = u_k + Omega(u_k - u_{k-1}, u_k, u_{k-1})
//
// The minimal fixed point v* of psi bounds the distance from x0 to every
// Newton iterate and to the limit.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nkcert/modulus.hpp"
#include "nkcert/numerics.hpp"

namespace nkcert {

/// The triple (omega0, eta, R) with 0 <= eta <= R and omega0 defined on [0, R].
class MajorantModel {
 public:
  MajorantModel(ContinuityModulus modulus, double eta, double radius);

  const ContinuityModulus& modulus() const noexcept { return modulus_; }
  double eta() const noexcept { return eta_; }
  double radius() const noexcept { return radius_; }

 private:
  ContinuityModulus modulus_;
  double eta_;
  double radius_;
};

enum class SequenceStatus { Converged, ExceededRadius, ModulusSaturated, IterationCapped };

std::string to_string(SequenceStatus s);

struct MajorantSequenceResult {
  std::vector<double> values;  // v_0 .. v_K, non-decreasing
  SequenceStatus status = SequenceStatus::IterationCapped;
  std::optional<double> v_star;  // set iff Converged
  int iterations = 0;
  /// The plain recurrence hit its cap and the limit was located by the
  /// safeguarded Aitken continuation instead.
  bool accelerated = false;
};

struct FixedPoint {
  double value = 0.0;
  /// eta == 0 or v* == eta: the strict requirement eta < v* cannot hold,
  /// but the Newton sequence is stationary from the first step on.
  bool degenerate = false;
};

inline constexpr int kDefaultMaxIter = 100000;
inline constexpr double kSequenceTolerance = 1e-14;
inline constexpr double kSaturationMargin = 1e-12;
/// A point with |v - phi(v)| within this (times max(1, v)) counts as a
/// fixed point when the iteration stalls at a tangency.
inline constexpr double kTangentTolerance = 1e-12;

/// Throws ModulusSaturated when omega0(s) >= 1 - 1e-12.
double gamma(const MajorantModel& model, double s);

/// Uses the closed form eta + l0 v^2 / (1 - l0 v) for linear moduli.
double psi(const MajorantModel& model, double v);

/// Iterates phi from 0 and locates its minimal fixed point on [0, radius].
///
/// The plain recurrence runs until its increment drops below
/// 1e-14 * max(1, v), it leaves [0, radius], phi saturates, or max_iter
/// steps pass. A converged limit is polished by bisection on v - phi(v)
/// over [v_K, min(R, v_K + 10 (v_K - v_{K-1}) + 1e-12)]. When the cap is
/// hit, a safeguarded Aitken continuation keeps searching; its iterates are
/// not appended to `values`. If that stalls too, the largest value of
/// v - phi(v) on [v_K, R] decides: >= 0 brackets a root for bisection,
/// within kTangentTolerance of 0 is accepted as a tangential fixed point.
MajorantSequenceResult iterate_fixed_point(const std::function<double(double)>& phi, double radius,
                                           int max_iter = kDefaultMaxIter);

MajorantSequenceResult majorant_sequence(const MajorantModel& model, int max_iter = kDefaultMaxIter);

/// v* when the sequence converges with eta < v* <= R, or a degenerate
/// fixed point (eta == 0 or v* == eta); nullopt otherwise.
std::optional<FixedPoint> fixed_point_of(const MajorantModel& model, const MajorantSequenceResult& seq);
std::optional<FixedPoint> minimal_fixed_point(const MajorantModel& model);

/// Requires 0 <= r <= s <= R and r + t <= R.
double omega_bound(const MajorantModel& model, double t, double s, double r);
double omega_majorant(const MajorantModel& model, double t, double s, double r);

MajorantSequenceResult rheinboldt_sequence(const MajorantModel& model, int max_iter = kDefaultMaxIter);

}  // namespace nkcert
