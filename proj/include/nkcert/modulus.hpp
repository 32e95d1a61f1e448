#pragma once

// Centered continuity moduli omega0(r), bounding
// ||F'(x0)^{-1} (F'(x) - F'(x0))|| for ||x - x0|| <= r.

#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nkcert {

class NonlinearSystem;

struct LinearModulus {
  double l0 = 0.0;
};

/// Hoelder-type modulus c * r^p with 0 < p <= 1.
struct PowerModulus {
  double c = 0.0;
  double p = 1.0;
};

struct Knot {
  double r = 0.0;
  double w = 0.0;
  friend bool operator==(const Knot&, const Knot&) = default;
};

class PiecewiseLinearModulus {
 public:
  /// Knots must start at (0, 0), with strictly increasing r and
  /// non-decreasing w.
  explicit PiecewiseLinearModulus(std::vector<Knot> knots);

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  double max_radius() const noexcept { return knots_.back().r; }
  double eval(double r) const;
  double integral(double v) const;

 private:
  std::size_t segment(double r) const;

  std::vector<Knot> knots_;
  std::vector<double> cumulative_;  // integral from 0 to knots_[i].r
};

class ContinuityModulus {
 public:
  enum class Kind { Linear, Power, PiecewiseLinear };

  static ContinuityModulus linear(double l0);
  static ContinuityModulus power(double c, double p);
  static ContinuityModulus table(std::vector<Knot> knots);

  Kind kind() const noexcept;
  const LinearModulus* as_linear() const noexcept { return std::get_if<LinearModulus>(&repr_); }
  const PowerModulus* as_power() const noexcept { return std::get_if<PowerModulus>(&repr_); }
  const PiecewiseLinearModulus* as_table() const noexcept { return std::get_if<PiecewiseLinearModulus>(&repr_); }

  /// Largest r at which the modulus may be evaluated (infinite for the
  /// analytic families).
  double max_radius() const noexcept;

  /// True for moduli built from finitely many Jacobian samples. Such a
  /// modulus under-approximates the true one, so anything derived from it
  /// is heuristic.
  bool lower_estimate() const noexcept { return lower_estimate_; }
  ContinuityModulus as_lower_estimate() const;

  std::string describe() const;

 private:
  using Repr = std::variant<LinearModulus, PowerModulus, PiecewiseLinearModulus>;
  explicit ContinuityModulus(Repr r) : repr_(std::move(r)) {}

  Repr repr_;
  bool lower_estimate_ = false;
};

/// omega0(r). Throws BeyondTabulatedRange past the last knot of a table.
double eval_modulus(const ContinuityModulus& m, double r);

/// Integral of omega0 over [0, v], in closed form for every variant.
double integral_modulus(const ContinuityModulus& m, double v);

/// Center-Lipschitz / Lipschitz pair (l0, l) with 0 <= l0 <= l.
///
/// Zero constants are accepted for systems with a constant Jacobian.
class LipschitzPair {
 public:
  LipschitzPair(double l0, double l);
  double l0() const noexcept { return l0_; }
  double l() const noexcept { return l_; }

 private:
  double l0_;
  double l_;
};

/// Empirical lower envelope of omega0 from Jacobian samples.
///
/// For each radius r the Jacobian is sampled at x0 + r d over all
/// +/- coordinate directions and (dirs_per_radius - 2n) random unit
/// directions in the infinity norm; the running maximum of the sampled
/// operator norms becomes a PiecewiseLinear modulus with a leading (0, 0)
/// knot, flagged as a lower estimate.
ContinuityModulus estimate_modulus(const NonlinearSystem& sys, std::span<const double> radii, int dirs_per_radius,
                                   std::mt19937_64& rng);

}  // namespace nkcert
