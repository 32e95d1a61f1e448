#include "nkcert/criteria.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// q(r0) < 1  <=>  omega0(r0) < 1/3.
constexpr double kArgyrosQMargin = 1e-12;

void require_eta(double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be finite and >= 0");
}

struct ArgyrosOutcome {
  std::optional<double> r0;
  double q = 0.0;
  bool passed = false;
  SequenceStatus status = SequenceStatus::IterationCapped;
};

double q_of(double w) { return 2.0 * w / (1.0 - w); }

ArgyrosOutcome argyros_general(const MajorantModel& model) {
  const auto seq = iterate_fixed_point([&model](double v) { return argyros_majorant(model, v); }, model.radius());
  ArgyrosOutcome out;
  out.status = seq.status;
  if (seq.status != SequenceStatus::Converged || !seq.v_star || *seq.v_star > model.radius()) return out;
  const double r0 = *seq.v_star;
  const double w = eval_modulus(model.modulus(), r0);
  out.r0 = r0;
  out.q = q_of(w);
  out.passed = (r0 > 0.0 || model.eta() == 0.0) && w < 1.0 / 3.0 - kArgyrosQMargin;
  return out;
}

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::Kantorovich: return "kantorovich";
    case Criterion::NewCondition: return "new-condition";
    case Criterion::Argyros: return "argyros";
  }
  return "unknown";
}

Criterion criterion_from_string(const std::string& s) {
  if (s == "kantorovich") return Criterion::Kantorovich;
  if (s == "new-condition") return Criterion::NewCondition;
  if (s == "argyros") return Criterion::Argyros;
  throw ParseError("unknown criterion '" + s + "'");
}

std::optional<double> Certificate::diagnostic(const std::string& name) const {
  for (const auto& [key, value] : diagnostics)
    if (key == name) return value;
  return std::nullopt;
}

Certificate check_kantorovich(const LipschitzPair& pair, double eta) {
  require_eta(eta);
  const double l = pair.l();
  const double product = l * eta;
  Certificate cert;
  cert.criterion = Criterion::Kantorovich;
  cert.eta = eta;
  cert.eta_max = l > 0.0 ? thresholds::kKantorovich / l : kInf;
  cert.passed = product <= thresholds::kKantorovich + thresholds::kBoundarySlack;
  if (cert.passed) {
    // Smaller root of eta - v + l v^2 / 2, written without cancellation.
    const double disc = std::max(0.0, 1.0 - 2.0 * product);
    cert.v_star = 2.0 * eta / (1.0 + std::sqrt(disc));
  }
  cert.diagnostics = {{"l", l}, {"l*eta", product}, {"threshold", thresholds::kKantorovich}};
  return cert;
}

Certificate check_new_lipschitz(const LipschitzPair& pair, double eta, double radius) {
  require_eta(eta);
  if (!(radius > 0.0)) throw InvalidArgument("R must be > 0");
  const double l0 = pair.l0();
  const double x = l0 * eta;
  // x^2 - 6x + 1 in factored form, exact zero at the threshold itself.
  const double d = (x - (3.0 + 2.0 * std::sqrt(2.0))) * (x - thresholds::kNewCondition);

  Certificate cert;
  cert.criterion = Criterion::NewCondition;
  cert.eta = eta;

  // v*(eta) increases with eta and reaches (1 + gamma*) / (4 l0) at the
  // threshold, so R only binds below l0 R = 1 - sqrt(2)/2.
  if (l0 == 0.0) {
    cert.eta_max = radius;
  } else if (l0 * radius >= 1.0 - std::sqrt(2.0) / 2.0) {
    cert.eta_max = thresholds::kNewCondition / l0;
  } else {
    cert.eta_max = radius * (1.0 - 2.0 * l0 * radius) / (1.0 - l0 * radius);
  }

  cert.diagnostics = {{"l0", l0}, {"l0*eta", x}, {"discriminant", d}, {"threshold", thresholds::kNewCondition}};
  if (l0 > 0.0) cert.diagnostics.emplace_back("eta_max_unconstrained", thresholds::kNewCondition / l0);

  if (x <= thresholds::kNewCondition + thresholds::kBoundarySlack) {
    const double root = 2.0 * eta / ((1.0 + x) + std::sqrt(std::max(0.0, d)));
    cert.diagnostics.emplace_back("minimal_root", root);
    if (root <= radius) {
      cert.passed = true;
      cert.v_star = root;
    }
  }
  return cert;
}

double new_condition_eta_max(const ContinuityModulus& modulus, double radius) {
  const MajorantModel bounds(modulus, 0.0, radius);  // validates R against the modulus
  const auto h = [&](double v) {
    const double w = eval_modulus(modulus, v);
    if (w >= 1.0 - kSaturationMargin) return -kInf;
    return v - 2.0 * integral_modulus(modulus, v) / (1.0 - w);
  };
  return std::clamp(maximize(h, 0.0, bounds.radius()).value, 0.0, radius);
}

Certificate check_new_general(const MajorantModel& model) {
  const auto seq = majorant_sequence(model);
  const auto fp = fixed_point_of(model, seq);

  Certificate cert;
  cert.criterion = Criterion::NewCondition;
  cert.eta = model.eta();
  cert.heuristic = model.modulus().lower_estimate();
  cert.passed = fp.has_value();
  cert.eta_max = new_condition_eta_max(model.modulus(), model.radius());
  cert.diagnostics = {{"sequence_status", static_cast<double>(seq.status)},
                      {"iterations", static_cast<double>(seq.iterations)}};
  if (seq.accelerated) cert.diagnostics.emplace_back("accelerated", 1.0);
  if (fp) {
    cert.v_star = fp->value;
    cert.diagnostics.emplace_back("degenerate", fp->degenerate ? 1.0 : 0.0);
    cert.diagnostics.emplace_back("omega0(v*)", eval_modulus(model.modulus(), fp->value));
  }
  return cert;
}

double argyros_majorant(const MajorantModel& model, double v) {
  const auto& m = model.modulus();
  const double w = eval_modulus(m, v);
  return gamma(model, v) * (integral_modulus(m, v) + w * v + model.eta());
}

double argyros_eta_max(const ContinuityModulus& modulus, double radius) {
  const MajorantModel bounds(modulus, 0.0, radius);
  const auto h = [&](double v) {
    const double w = eval_modulus(modulus, v);
    if (w >= 1.0 / 3.0 - kArgyrosQMargin) return -kInf;
    return v - 2.0 * w * v - integral_modulus(modulus, v);
  };
  return std::clamp(maximize(h, 0.0, bounds.radius()).value, 0.0, radius);
}

Certificate check_argyros(const MajorantModel& model) {
  Certificate cert;
  cert.criterion = Criterion::Argyros;
  cert.eta = model.eta();
  cert.heuristic = model.modulus().lower_estimate();

  const auto* lin = model.modulus().as_linear();
  if (lin && lin->l0 > 0.0) {
    // f(v) = v reduces to (5/2) l0 v^2 - v + eta = 0.
    const double l0 = lin->l0;
    const double eta = model.eta();
    const double radius = model.radius();
    const double x = l0 * eta;
    const double disc = 1.0 - 10.0 * x;
    cert.eta_max = l0 * radius >= 0.2 ? thresholds::kArgyros / l0 : radius - 2.5 * l0 * radius * radius;
    cert.diagnostics = {{"l0*eta", x}, {"discriminant", disc}, {"threshold", thresholds::kArgyros}};
    if (x <= thresholds::kArgyros + thresholds::kBoundarySlack) {
      const double r0 = 2.0 * eta / (1.0 + std::sqrt(std::max(0.0, disc)));
      const double w = l0 * r0;
      cert.diagnostics.emplace_back("r0", r0);
      cert.diagnostics.emplace_back("q(r0)", q_of(w));
      if (r0 <= radius && w < 1.0 / 3.0 - kArgyrosQMargin) {
        cert.passed = true;
        cert.v_star = r0;
      }
    }
    return cert;
  }

  const auto outcome = argyros_general(model);
  cert.passed = outcome.passed;
  cert.eta_max = argyros_eta_max(model.modulus(), model.radius());
  cert.diagnostics = {{"sequence_status", static_cast<double>(outcome.status)}};
  if (outcome.r0) {
    cert.diagnostics.emplace_back("r0", *outcome.r0);
    cert.diagnostics.emplace_back("q(r0)", outcome.q);
  }
  if (cert.passed) cert.v_star = outcome.r0;
  return cert;
}

Comparison compare_criteria(const LipschitzPair& pair, double eta, double radius) {
  if (!(pair.l() > 0.0)) throw InvalidArgument("comparison needs a positive Lipschitz constant l");
  Comparison out;
  out.verdict.ratio = pair.l0() / pair.l();
  out.verdict.critical_ratio = thresholds::kCriticalRatio;
  out.verdict.new_weaker_than_kantorovich =
      out.verdict.ratio < thresholds::kCriticalRatio - thresholds::kBoundarySlack;

  out.certificates.push_back(check_kantorovich(pair, eta));
  out.certificates.push_back(check_new_lipschitz(pair, eta, radius));
  out.certificates.push_back(check_argyros(MajorantModel(ContinuityModulus::linear(pair.l0()), eta, radius)));

  out.diagnostics = {{"threshold_kantorovich", thresholds::kKantorovich},
                     {"threshold_new", thresholds::kNewCondition},
                     {"threshold_argyros", thresholds::kArgyros},
                     {"threshold_argyros_earlier", thresholds::kArgyrosEarlier},
                     {"critical_ratio", thresholds::kCriticalRatio}};
  if (pair.l0() > 0.0) {
    out.diagnostics.emplace_back("eta_max_new", thresholds::kNewCondition / pair.l0());
    out.diagnostics.emplace_back("eta_max_argyros", thresholds::kArgyros / pair.l0());
    out.diagnostics.emplace_back("eta_max_argyros_earlier", thresholds::kArgyrosEarlier / pair.l0());
  }
  return out;
}

}  // namespace nkcert
