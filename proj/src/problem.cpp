#include "nkcert/problem.hpp"

#include <cmath>
#include <utility>

#include "nkcert/error.hpp"
#include "nkcert/expression.hpp"

namespace nkcert {

NonlinearSystem::NonlinearSystem(std::string name, ResidualFn residual, JacobianFn jacobian, Vector x0, double radius)
    : name_(std::move(name)),
      residual_(std::move(residual)),
      jacobian_(std::move(jacobian)),
      x0_(std::move(x0)),
      radius_(radius) {
  if (x0_.empty()) throw InvalidArgument("starting point must have dimension >= 1");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw InvalidArgument("domain radius R must be finite and > 0");
  if (!residual_ || !jacobian_) throw InvalidArgument("system needs both F and its Jacobian");
  // Probe: both evaluators agree on the dimension and F'(x0) is invertible.
  const Vector f0 = this->residual(x0_);
  LuFactorization(this->jacobian(x0_)).solve(f0);
}

NonlinearSystem NonlinearSystem::from_expressions(std::string name, const std::vector<std::string>& components,
                                                  Vector x0, double radius) {
  const std::size_t n = x0.size();
  if (components.size() != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " component expressions, got " +
                          std::to_string(components.size()));
  }
  std::vector<Expression> f;
  std::vector<Expression> df;  // row-major partials
  f.reserve(n);
  df.reserve(n * n);
  for (const auto& text : components) {
    auto e = Expression::parse(text, n);
    for (std::size_t j = 0; j < n; ++j) df.push_back(e.derivative(j));
    f.push_back(std::move(e));
  }
  auto residual = [f](const Vector& x) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].evaluate(x.values());
    return Vector(std::move(out));
  };
  auto jacobian = [df, n](const Vector& x) {
    std::vector<double> out(n * n);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = df[k].evaluate(x.values());
    return Matrix(n, std::move(out));
  };
  return NonlinearSystem(std::move(name), residual, jacobian, std::move(x0), radius);
}

Vector NonlinearSystem::residual(const Vector& x) const {
  if (x.size() != dimension()) throw InvalidArgument("point has wrong dimension");
  Vector out = residual_(x);
  if (out.size() != dimension()) throw InvalidArgument("F returned a vector of wrong dimension");
  return out;
}

Matrix NonlinearSystem::jacobian(const Vector& x) const {
  if (x.size() != dimension()) throw InvalidArgument("point has wrong dimension");
  Matrix out = jacobian_(x);
  if (out.size() != dimension()) throw InvalidArgument("Jacobian has wrong dimension");
  if (!out.all_finite()) throw InvalidArgument("Jacobian has a non-finite entry");
  return out;
}

bool NonlinearSystem::in_domain(const Vector& x) const {
  return norm_inf(x - x0_) <= radius_ * (1.0 + 1e-12);
}

Vector newton_step(const NonlinearSystem& sys, const Vector& x) {
  if (!sys.in_domain(x)) {
    throw OutOfDomain("point at distance " + std::to_string(norm_inf(x - sys.x0())) +
                      " from x0 lies outside the ball of radius " + std::to_string(sys.radius()));
  }
  return x - solve_linear(sys.jacobian(x), sys.residual(x));
}

double eta_of(const NonlinearSystem& sys) {
  return norm_inf(solve_linear(sys.jacobian(sys.x0()), sys.residual(sys.x0())));
}

double centered_deviation(const NonlinearSystem& sys, const LuFactorization& j0, const Vector& x) {
  if (!sys.in_domain(x)) throw OutOfDomain("sample point lies outside the domain ball");
  return operator_norm_inf(j0.solve(sys.jacobian(x) - sys.jacobian(sys.x0())));
}

// ------------------------------------------------------------- built-ins

namespace {

double scalar_start(const BuiltinOptions& o, double fallback) {
  if (!o.x0) return fallback;
  if (o.x0->size() != 1) throw InvalidArgument("this built-in problem is scalar; x0 must have one entry");
  return (*o.x0)[0];
}

Vector vector_start(const BuiltinOptions& o, Vector fallback) {
  if (!o.x0) return fallback;
  if (o.x0->size() != fallback.size()) {
    throw InvalidArgument("x0 must have " + std::to_string(fallback.size()) + " entries");
  }
  return *o.x0;
}

Matrix scalar_matrix(double v) { return Matrix(1, {v}); }

// F(x) = x^2 - 2. F'(x0)^{-1}(F'(x) - F'(x0)) = (x - x0)/x0, so
// omega0(r) = r/|x0| and the Lipschitz constant is the same.
BuiltinProblem scalar_sqrt2(const BuiltinOptions& o) {
  const double x0 = scalar_start(o, 1.4);
  const double radius = o.radius.value_or(0.75 * std::abs(x0));
  NonlinearSystem sys(
      "scalar-sqrt2", [](const Vector& x) { return Vector{x[0] * x[0] - 2.0}; },
      [](const Vector& x) { return scalar_matrix(2.0 * x[0]); }, Vector{x0}, radius);
  const double l0 = 1.0 / std::abs(x0);
  return {std::move(sys), ContinuityModulus::linear(l0), l0, l0};
}

// F(x) = e^x - 1.1. The centered deviation is e^(x - x0) - 1, maximized by
// e^r - 1. That convex function is tabulated on a uniform grid; chords lie
// above it, so the table is a valid modulus.
BuiltinProblem scalar_exp(const BuiltinOptions& o) {
  const double x0 = scalar_start(o, 0.0);
  const double radius = o.radius.value_or(0.5);
  NonlinearSystem sys(
      "scalar-exp", [](const Vector& x) { return Vector{std::exp(x[0]) - 1.1}; },
      [](const Vector& x) { return scalar_matrix(std::exp(x[0])); }, Vector{x0}, radius);
  constexpr int kSegments = 256;
  std::vector<Knot> knots;
  knots.reserve(kSegments + 1);
  for (int i = 0; i <= kSegments; ++i) {
    const double r = radius * i / kSegments;
    knots.push_back({r, std::expm1(r)});
  }
  const double l0 = std::expm1(radius) / radius;
  const double l = std::exp(radius);
  return {std::move(sys), ContinuityModulus::table(std::move(knots)), l0, l};
}

// F1 = x1^2 + x1 x2 - 3, F2 = x2^2 - x1 - 3 with root (1, 2). The Jacobian
// is affine, F'(x0 + d) - F'(x0) = [[2 d1 + d2, d1], [0, 2 d2]], so
// ||F'(x0)^{-1} (F'(x) - F'(y))|| is a convex function of x - y that peaks
// on a vertex of the unit cube: l0 = l = that maximum.
BuiltinProblem two_d_quadratic(const BuiltinOptions& o) {
  const Vector x0 = vector_start(o, Vector{1.1, 1.9});
  const double radius = o.radius.value_or(0.5);
  auto jac = [](const Vector& x) { return Matrix::from_rows({{2.0 * x[0] + x[1], x[0]}, {-1.0, 2.0 * x[1]}}); };
  NonlinearSystem sys(
      "2d-quadratic",
      [](const Vector& x) { return Vector{x[0] * x[0] + x[0] * x[1] - 3.0, x[1] * x[1] - x[0] - 3.0}; }, jac, x0,
      radius);
  const LuFactorization j0(jac(x0));
  double l0 = 0.0;
  for (double d1 : {1.0, -1.0}) {
    for (double d2 : {1.0, -1.0}) {
      const Matrix delta = Matrix::from_rows({{2.0 * d1 + d2, d1}, {0.0, 2.0 * d2}});
      l0 = std::max(l0, operator_norm_inf(j0.solve(delta)));
    }
  }
  return {std::move(sys), ContinuityModulus::linear(l0), l0, l0};
}

// F(x) = x + (2/3) sgn(x) |x|^{3/2} - 0.01, so F'(x) = 1 + sqrt|x|. The
// Jacobian is only Hoelder continuous; since |sqrt a - sqrt b| <= sqrt|a - b|
// the centered deviation is at most sqrt(r) / (1 + sqrt|x0|).
BuiltinProblem scalar_holder(const BuiltinOptions& o) {
  const double x0 = scalar_start(o, 0.0);
  const double radius = o.radius.value_or(0.25);
  NonlinearSystem sys(
      "scalar-holder",
      [](const Vector& x) {
        const double a = std::abs(x[0]);
        return Vector{x[0] + (2.0 / 3.0) * std::copysign(a * std::sqrt(a), x[0]) - 0.01};
      },
      [](const Vector& x) { return scalar_matrix(1.0 + std::sqrt(std::abs(x[0]))); }, Vector{x0}, radius);
  return {std::move(sys), ContinuityModulus::power(1.0 / (1.0 + std::sqrt(std::abs(x0))), 0.5), std::nullopt,
          std::nullopt};
}

// F(x) = A (x - c); the Jacobian is constant so omega0 = 0.
BuiltinProblem affine(const BuiltinOptions& o) {
  const Vector x0 = vector_start(o, Vector{0.0, 0.0, 0.0});
  const double radius = o.radius.value_or(2.0);
  const Matrix a = Matrix::from_rows({{4.0, 1.0, 0.0}, {1.0, 3.0, 1.0}, {0.0, 1.0, 2.0}});
  const Vector c{1.0, -1.0, 0.5};
  NonlinearSystem sys(
      "affine", [a, c](const Vector& x) { return a * (x - c); }, [a](const Vector&) { return a; }, x0, radius);
  return {std::move(sys), ContinuityModulus::linear(0.0), 0.0, 0.0};
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"scalar-sqrt2", "scalar-exp", "2d-quadratic", "scalar-holder", "affine"};
}

BuiltinProblem load_builtin(const std::string& name, const BuiltinOptions& options) {
  if (name == "scalar-sqrt2") return scalar_sqrt2(options);
  if (name == "scalar-exp") return scalar_exp(options);
  if (name == "2d-quadratic") return two_d_quadratic(options);
  if (name == "scalar-holder") return scalar_holder(options);
  if (name == "affine") return affine(options);
  throw UnknownProblem("unknown built-in problem '" + name + "'");
}

}  // namespace nkcert
