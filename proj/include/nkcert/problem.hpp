#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nkcert/modulus.hpp"
#include "nkcert/numerics.hpp"

namespace nkcert {

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// F : R^n -> R^n with analytic Jacobian on the closed ball B(x0, R).
///
/// Evaluators must be pure. Construction probes F'(x0) and throws
/// SingularMatrix if it is not invertible.
class NonlinearSystem {
 public:
  NonlinearSystem(std::string name, ResidualFn residual, JacobianFn jacobian, Vector x0, double radius);

  /// Builds F and its symbolic Jacobian from one expression per component.
  static NonlinearSystem from_expressions(std::string name, const std::vector<std::string>& components, Vector x0,
                                          double radius);

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return x0_.size(); }
  const Vector& x0() const noexcept { return x0_; }
  double radius() const noexcept { return radius_; }

  Vector residual(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;

  /// ||x - x0|| <= R, up to a relative slack of 1e-12.
  bool in_domain(const Vector& x) const;

 private:
  std::string name_;
  ResidualFn residual_;
  JacobianFn jacobian_;
  Vector x0_;
  double radius_;
};

/// One Newton step T(x) = x - F'(x)^{-1} F(x).
Vector newton_step(const NonlinearSystem& sys, const Vector& x);

/// ||F'(x0)^{-1} F(x0)||, the smallest admissible eta.
double eta_of(const NonlinearSystem& sys);

/// ||F'(x0)^{-1} (F'(x) - F'(x0))||, the quantity omega0 has to bound.
double centered_deviation(const NonlinearSystem& sys, const LuFactorization& j0, const Vector& x);

struct BuiltinProblem {
  NonlinearSystem system;
  ContinuityModulus analytic_modulus;
  std::optional<double> analytic_l0;
  std::optional<double> analytic_l;
};

struct BuiltinOptions {
  std::optional<Vector> x0;
  std::optional<double> radius;
};

std::vector<std::string> builtin_names();

/// Throws UnknownProblem for names outside builtin_names().
BuiltinProblem load_builtin(const std::string& name, const BuiltinOptions& options = {});

}  // namespace nkcert
