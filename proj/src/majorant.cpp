#include "nkcert/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr int kMaxAitkenCycles = 2000;
constexpr int kMaxBisections = 200;

double step_tolerance(double v) { return kSequenceTolerance * std::max(1.0, v); }

void require_in_range(const MajorantModel& model, double v, const char* what) {
  if (!(v >= 0.0) || v > model.radius() * (1.0 + kDomainSlack)) {
    throw InvalidArgument(std::string(what) + " argument " + std::to_string(v) + " outside [0, R]");
  }
}

// Shrinks [lo, hi] around a sign change of g(v) = v - phi(v), assuming
// g(lo) < 0 < g(hi). Returns hi, which satisfies hi >= phi(hi).
double bisect_fixed_point(const std::function<double(double)>& phi, double lo, double hi) {
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid - phi(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Polishes a converged limit. `last` is v_K and `step` is v_K - v_{K-1}.
double polish(const std::function<double(double)>& phi, double radius, double last, double step) {
  const double lo = last;
  const double hi = std::min(radius, last + 10.0 * step + 1e-12);
  if (!(hi > lo)) return last;
  try {
    if (lo - phi(lo) < 0.0 && hi - phi(hi) > 0.0) return bisect_fixed_point(phi, lo, hi);
  } catch (const ModulusSaturated&) {
  }
  return last;
}

struct Continuation {
  SequenceStatus status;
  double v_star = 0.0;
};

// Steffensen-style continuation for slowly converging (near tangential)
// fixed points. Each cycle takes two plain steps a -> b -> c and
// extrapolates w = a + (b - a)^2 / ((b - a) - (c - b)). If w is a
// super-solution (w >= phi(w)) then every iterate stays below w and the
// minimal fixed point lies in [c, w]; otherwise w is a sub-solution and the
// search restarts from it.
Continuation continue_aitken(const std::function<double(double)>& phi, double radius, double start) {
  double v = start;
  for (int cycle = 0; cycle < kMaxAitkenCycles; ++cycle) {
    const double a = v;
    const double b = phi(a);
    if (b > radius) return {SequenceStatus::ExceededRadius};
    if (std::abs(b - a) <= step_tolerance(a)) return {SequenceStatus::Converged, polish(phi, radius, b, b - a)};
    const double c = phi(b);
    if (c > radius) return {SequenceStatus::ExceededRadius};
    const double d1 = b - a;
    const double d2 = c - b;
    if (!(d1 > 0.0) || d2 >= d1) {
      v = c;
      continue;
    }
    const double w = std::min(radius, a + d1 * d1 / (d1 - d2));
    if (!(w > c)) {
      v = c;
      continue;
    }
    double gw;
    try {
      gw = w - phi(w);
    } catch (const ModulusSaturated&) {
      v = c;
      continue;
    }
    if (gw >= 0.0) {
      const double gc = c - phi(c);
      if (gc >= 0.0) return {SequenceStatus::Converged, bisect_fixed_point(phi, b, c)};
      return {SequenceStatus::Converged, bisect_fixed_point(phi, c, w)};
    }
    v = w;
  }
  return {SequenceStatus::IterationCapped};
}

// Last resort when even the continuation stalls: a (near) tangential fixed
// point, where v - phi(v) barely reaches zero. Looks for the largest value
// of v - phi(v) on [start, radius].
Continuation tangent_search(const std::function<double(double)>& phi, double radius, double start) {
  const auto g = [&phi](double v) {
    try {
      return v - phi(v);
    } catch (const ModulusSaturated&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  if (!(radius > start)) return {SequenceStatus::IterationCapped};
  const Maximum top = maximize(g, start, radius);
  if (top.value >= 0.0) {
    if (g(start) >= 0.0) return {SequenceStatus::Converged, start};
    return {SequenceStatus::Converged, bisect_fixed_point(phi, start, top.x)};
  }
  if (top.value >= -kTangentTolerance * std::max(1.0, top.x)) return {SequenceStatus::Converged, top.x};
  return {SequenceStatus::IterationCapped};
}

}  // namespace

MajorantModel::MajorantModel(ContinuityModulus modulus, double eta, double radius)
    : modulus_(std::move(modulus)), eta_(eta), radius_(radius) {
  if (!(eta_ >= 0.0) || !std::isfinite(eta_)) throw InvalidArgument("eta must be finite and >= 0");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw InvalidArgument("R must be finite and > 0");
  if (eta_ > radius_) throw InvalidArgument("eta exceeds the domain radius R");
  if (radius_ > modulus_.max_radius() * (1.0 + kDomainSlack)) {
    throw InvalidArgument("the modulus is not defined on all of [0, R]");
  }
}

std::string to_string(SequenceStatus s) {
  switch (s) {
    case SequenceStatus::Converged: return "converged";
    case SequenceStatus::ExceededRadius: return "exceeded-radius";
    case SequenceStatus::ModulusSaturated: return "modulus-saturated";
    case SequenceStatus::IterationCapped: return "iteration-capped";
  }
  return "unknown";
}

double gamma(const MajorantModel& model, double s) {
  require_in_range(model, s, "gamma");
  const double w = eval_modulus(model.modulus(), s);
  if (w >= 1.0 - kSaturationMargin) {
    throw ModulusSaturated("omega0(" + std::to_string(s) + ") = " + std::to_string(w) + " reached 1");
  }
  return 1.0 / (1.0 - w);
}

double psi(const MajorantModel& model, double v) {
  require_in_range(model, v, "psi");
  if (const auto* lin = model.modulus().as_linear()) {
    const double w = lin->l0 * v;
    if (w >= 1.0 - kSaturationMargin) {
      throw ModulusSaturated("omega0(" + std::to_string(v) + ") = " + std::to_string(w) + " reached 1");
    }
    return model.eta() + lin->l0 * v * v / (1.0 - w);
  }
  return model.eta() + 2.0 * gamma(model, v) * integral_modulus(model.modulus(), v);
}

MajorantSequenceResult iterate_fixed_point(const std::function<double(double)>& phi, double radius, int max_iter) {
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  MajorantSequenceResult out;
  out.values.push_back(0.0);

  double v = 0.0;
  double last_step = 0.0;
  bool converged = false;
  for (int k = 0; k < max_iter; ++k) {
    double next;
    try {
      next = phi(v);
    } catch (const ModulusSaturated&) {
      out.status = SequenceStatus::ModulusSaturated;
      return out;
    }
    if (next > radius) {
      out.status = SequenceStatus::ExceededRadius;
      return out;
    }
    out.iterations = k + 1;
    const double step = next - v;
    if (k == 0 && next == 0.0) {
      // phi(0) = 0: x0 already solves the system.
      out.status = SequenceStatus::Converged;
      out.v_star = 0.0;
      return out;
    }
    out.values.push_back(next);
    v = next;
    last_step = step;
    if (std::abs(step) <= step_tolerance(v - step)) {
      converged = true;
      break;
    }
  }

  if (converged) {
    out.status = SequenceStatus::Converged;
    out.v_star = polish(phi, radius, v, last_step);
    return out;
  }

  Continuation c;
  try {
    c = continue_aitken(phi, radius, v);
  } catch (const ModulusSaturated&) {
    c = {SequenceStatus::ModulusSaturated};
  }
  if (c.status == SequenceStatus::IterationCapped) c = tangent_search(phi, radius, v);
  out.status = c.status;
  if (c.status == SequenceStatus::Converged) {
    out.v_star = c.v_star;
    out.accelerated = true;
  }
  return out;
}

MajorantSequenceResult majorant_sequence(const MajorantModel& model, int max_iter) {
  return iterate_fixed_point([&model](double v) { return psi(model, v); }, model.radius(), max_iter);
}

std::optional<FixedPoint> fixed_point_of(const MajorantModel& model, const MajorantSequenceResult& seq) {
  if (seq.status != SequenceStatus::Converged || !seq.v_star) return std::nullopt;
  const double v = *seq.v_star;
  if (v > model.radius()) return std::nullopt;
  if (model.eta() == 0.0 || v <= model.eta()) return FixedPoint{std::max(v, model.eta()), true};
  return FixedPoint{v, false};
}

std::optional<FixedPoint> minimal_fixed_point(const MajorantModel& model) {
  return fixed_point_of(model, majorant_sequence(model));
}

namespace {

void require_bound_args(const MajorantModel& model, double t, double s, double r) {
  const double slack = model.radius() * kDomainSlack;
  if (!(t >= 0.0) || !(r >= 0.0) || r > s + slack || s > model.radius() + slack || r + t > model.radius() + slack) {
    throw InvalidArgument("Omega requires 0 <= r <= s <= R and r + t <= R");
  }
}

}  // namespace

double omega_bound(const MajorantModel& model, double t, double s, double r) {
  require_bound_args(model, t, s, r);
  const auto& m = model.modulus();
  const double g = gamma(model, s);
  if (t == 0.0) return 0.0;
  return g * (integral_modulus(m, r + t) - integral_modulus(m, r) + eval_modulus(m, r) * t);
}

double omega_majorant(const MajorantModel& model, double t, double s, double r) {
  require_bound_args(model, t, s, r);
  const auto& m = model.modulus();
  return 2.0 * gamma(model, s) * integral_modulus(m, r + t) - 2.0 * gamma(model, r) * integral_modulus(m, r);
}

MajorantSequenceResult rheinboldt_sequence(const MajorantModel& model, int max_iter) {
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  MajorantSequenceResult out;
  out.values = {0.0, model.eta()};
  out.iterations = 1;
  double prev = 0.0;
  double cur = model.eta();
  if (std::abs(cur - prev) <= step_tolerance(prev)) {
    out.status = SequenceStatus::Converged;
    out.v_star = cur;
    return out;
  }
  for (int k = 1; k < max_iter; ++k) {
    double next;
    try {
      next = cur + omega_bound(model, cur - prev, cur, prev);
    } catch (const ModulusSaturated&) {
      out.status = SequenceStatus::ModulusSaturated;
      return out;
    }
    if (next > model.radius()) {
      out.status = SequenceStatus::ExceededRadius;
      return out;
    }
    out.values.push_back(next);
    out.iterations = k + 1;
    prev = cur;
    cur = next;
    if (cur - prev <= step_tolerance(prev)) {
      out.status = SequenceStatus::Converged;
      out.v_star = cur;
      return out;
    }
  }
  out.status = SequenceStatus::IterationCapped;
  return out;
}

}  // namespace nkcert
