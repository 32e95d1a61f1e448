#include "nkcert/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nkcert/error.hpp"
#include "nkcert/problem.hpp"

namespace nkcert {

namespace {

// Tolerates round-off when R coincides with the last knot.
constexpr double kTableSlack = 1e-14;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_radius(double r) {
  if (!(r >= 0.0) || std::isnan(r)) throw InvalidArgument("modulus argument must be >= 0");
}

}  // namespace

// ------------------------------------------------- PiecewiseLinearModulus

PiecewiseLinearModulus::PiecewiseLinearModulus(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw InvalidArgument("a tabulated modulus needs at least two knots");
  if (knots_.front().r != 0.0 || knots_.front().w != 0.0) throw InvalidArgument("first knot must be (0, 0)");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const auto& a = knots_[i - 1];
    const auto& b = knots_[i];
    if (!std::isfinite(b.r) || !std::isfinite(b.w)) throw InvalidArgument("knots must be finite");
    if (!(b.r > a.r)) throw InvalidArgument("knot radii must be strictly increasing");
    if (b.w < a.w) throw InvalidArgument("knot values must be non-decreasing");
  }
  cumulative_.resize(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const auto& a = knots_[i - 1];
    const auto& b = knots_[i];
    cumulative_[i] = cumulative_[i - 1] + 0.5 * (b.r - a.r) * (a.w + b.w);
  }
}

std::size_t PiecewiseLinearModulus::segment(double r) const {
  require_radius(r);
  const double rmax = max_radius();
  if (r > rmax * (1.0 + kTableSlack)) {
    throw BeyondTabulatedRange("r = " + std::to_string(r) + " is beyond the last knot " + std::to_string(rmax));
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), r, [](double v, const Knot& k) { return v < k.r; });
  if (it == knots_.end()) return knots_.size() - 2;
  return static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
}

double PiecewiseLinearModulus::eval(double r) const {
  const std::size_t i = segment(r);
  const auto& a = knots_[i];
  const auto& b = knots_[i + 1];
  const double t = std::min(r, b.r) - a.r;
  return a.w + (b.w - a.w) * t / (b.r - a.r);
}

double PiecewiseLinearModulus::integral(double v) const {
  const std::size_t i = segment(v);
  const double x = std::min(v, knots_[i + 1].r);
  return cumulative_[i] + 0.5 * (x - knots_[i].r) * (knots_[i].w + eval(x));
}

// ------------------------------------------------------ ContinuityModulus

ContinuityModulus ContinuityModulus::linear(double l0) {
  if (!(l0 >= 0.0) || !std::isfinite(l0)) throw InvalidArgument("linear modulus needs finite l0 >= 0");
  return ContinuityModulus(LinearModulus{l0});
}

ContinuityModulus ContinuityModulus::power(double c, double p) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("power modulus needs finite c >= 0");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("power modulus needs 0 < p <= 1");
  return ContinuityModulus(PowerModulus{c, p});
}

ContinuityModulus ContinuityModulus::table(std::vector<Knot> knots) {
  return ContinuityModulus(PiecewiseLinearModulus(std::move(knots)));
}

ContinuityModulus::Kind ContinuityModulus::kind() const noexcept {
  return static_cast<Kind>(repr_.index());
}

double ContinuityModulus::max_radius() const noexcept {
  if (const auto* t = as_table()) return t->max_radius();
  return std::numeric_limits<double>::infinity();
}

ContinuityModulus ContinuityModulus::as_lower_estimate() const {
  ContinuityModulus copy = *this;
  copy.lower_estimate_ = true;
  return copy;
}

std::string ContinuityModulus::describe() const {
  std::ostringstream os;
  os.precision(6);
  std::visit(Overloaded{
                 [&](const LinearModulus& m) { os << "linear l0=" << m.l0; },
                 [&](const PowerModulus& m) { os << "power c=" << m.c << " p=" << m.p; },
                 [&](const PiecewiseLinearModulus& m) {
                   os << "table " << m.knots().size() << " knots up to r=" << m.max_radius();
                 },
             },
             repr_);
  if (lower_estimate_) os << " (sampled lower estimate)";
  return os.str();
}

double eval_modulus(const ContinuityModulus& m, double r) {
  require_radius(r);
  if (const auto* lin = m.as_linear()) return lin->l0 * r;
  if (const auto* pw = m.as_power()) return pw->c * std::pow(r, pw->p);
  return m.as_table()->eval(r);
}

double integral_modulus(const ContinuityModulus& m, double v) {
  require_radius(v);
  if (const auto* lin = m.as_linear()) return 0.5 * lin->l0 * v * v;
  if (const auto* pw = m.as_power()) return pw->c * std::pow(v, pw->p + 1.0) / (pw->p + 1.0);
  return m.as_table()->integral(v);
}

// ---------------------------------------------------------- LipschitzPair

LipschitzPair::LipschitzPair(double l0, double l) : l0_(l0), l_(l) {
  if (!(l0 >= 0.0) || !std::isfinite(l0) || !(l >= 0.0) || !std::isfinite(l)) {
    throw InvalidArgument("Lipschitz constants must be finite and non-negative");
  }
  if (l0 > l) throw InvalidArgument("center-Lipschitz constant l0 exceeds Lipschitz constant l");
}

// --------------------------------------------------------------- sampling

ContinuityModulus estimate_modulus(const NonlinearSystem& sys, std::span<const double> radii, int dirs_per_radius,
                                   std::mt19937_64& rng) {
  const std::size_t n = sys.dimension();
  if (radii.empty()) throw InvalidArgument("estimate_modulus needs at least one radius");
  if (dirs_per_radius < 0 || static_cast<std::size_t>(dirs_per_radius) < 2 * n) {
    throw InvalidArgument("dirs_per_radius must be at least 2n = " + std::to_string(2 * n));
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InvalidArgument("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("radii must be strictly increasing");
    if (radii[i] > sys.radius()) {
      throw OutOfDomain("radius " + std::to_string(radii[i]) + " exceeds the domain radius " +
                        std::to_string(sys.radius()));
    }
  }

  const LuFactorization j0(sys.jacobian(sys.x0()));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<Vector> directions;
  for (std::size_t i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector d(n);
      d[i] = sign;
      directions.push_back(d);
    }
  }
  auto random_direction = [&] {
    for (;;) {
      std::vector<double> d(n);
      double m = 0.0;
      for (auto& x : d) {
        x = unit(rng);
        m = std::max(m, std::abs(x));
      }
      if (m == 0.0) continue;
      for (auto& x : d) x /= m;
      return Vector(std::move(d));
    }
  };

  std::vector<Knot> knots{{0.0, 0.0}};
  double envelope = 0.0;
  for (double r : radii) {
    double worst = 0.0;
    for (const auto& d : directions) worst = std::max(worst, centered_deviation(sys, j0, sys.x0() + r * d));
    for (std::size_t k = directions.size(); k < static_cast<std::size_t>(dirs_per_radius); ++k) {
      worst = std::max(worst, centered_deviation(sys, j0, sys.x0() + r * random_direction()));
    }
    envelope = std::max(envelope, worst);
    knots.push_back({r, envelope});
  }
  return ContinuityModulus::table(std::move(knots)).as_lower_estimate();
}

}  // namespace nkcert
