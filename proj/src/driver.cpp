#include "nkcert/driver.hpp"

#include <algorithm>
#include <cmath>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

// Majorant data the audits compare against.
struct Envelope {
  std::vector<double> values;
  std::optional<double> v_star;
  double radius = 0.0;

  // v_k, or v* once the stored prefix is exhausted.
  std::optional<double> at(std::size_t k) const {
    if (k < values.size()) return values[k];
    return v_star;
  }
  double slack() const { return kAuditSlack * std::max(1.0, v_star.value_or(radius)); }
};

NewtonTrace iterate(const NonlinearSystem& sys, const RunOptions& opts, const Envelope* env) {
  opts.validate();
  NewtonTrace trace;
  trace.certified = env && env->v_star.has_value();
  trace.v_star = env ? env->v_star : std::nullopt;

  auto record = [&](const Vector& x) {
    trace.iterates.push_back(x);
    trace.residual_norms.push_back(norm_inf(sys.residual(x)));
    if (env) trace.majorant_values.push_back(env->at(trace.iterates.size() - 1).value_or(std::nan("")));
  };

  record(sys.x0());
  for (;;) {
    const std::size_t k = trace.iterates.size() - 1;
    const Vector& x = trace.iterates.back();
    if (trace.residual_norms.back() <= opts.residual_tol) {
      trace.status = TerminalStatus::ConvergedToRoot;
      break;
    }
    if (static_cast<int>(k) >= opts.max_iterations) {
      trace.status = TerminalStatus::MaxIterations;
      break;
    }
    Vector next;
    try {
      next = newton_step(sys, x);
    } catch (const SingularMatrix& e) {
      trace.status = TerminalStatus::SingularJacobian;
      trace.note = e.what();
      break;
    }
    const double step = norm_inf(next - x);
    trace.step_norms.push_back(step);
    record(next);

    if (env) {
      StepAudit audit;
      const auto vk = env->at(k);
      const auto vk1 = env->at(k + 1);
      audit.step_bound_ok = vk && vk1 && step <= (*vk1 - *vk) + env->slack();
      const double ball = env->v_star.value_or(env->radius);
      audit.ball_ok = norm_inf(next - sys.x0()) <= ball + env->slack();
      trace.audits.push_back(audit);
      if (opts.audit_mode == AuditMode::Strict && !(audit.step_bound_ok && audit.ball_ok)) {
        trace.status = TerminalStatus::AuditViolation;
        trace.note = "majorization audit failed at step " + std::to_string(k);
        break;
      }
    }
    if (step <= opts.step_tol) {
      trace.status = trace.residual_norms.back() <= opts.residual_tol ? TerminalStatus::ConvergedToRoot
                                                                      : TerminalStatus::Stalled;
      break;
    }
  }

  if (trace.status == TerminalStatus::ConvergedToRoot) trace.x_star = trace.iterates.back();

  if (env && env->v_star) {
    const std::size_t last = trace.iterates.size() - 1;
    const double v_last = env->at(last).value_or(*env->v_star);
    trace.final_error_bound = *env->v_star - v_last;
    if (trace.x_star) {
      for (std::size_t k = 0; k < trace.audits.size(); ++k) {
        const double bound = *env->v_star - *env->at(k);
        trace.audits[k].limit_ok = norm_inf(*trace.x_star - trace.iterates[k]) <= bound + env->slack();
      }
    }
  }
  return trace;
}

}  // namespace

void RunOptions::validate() const {
  if (max_iterations < 0) throw InvalidArgument("max_iterations must be >= 0");
  if (!(residual_tol > 0.0)) throw InvalidArgument("residual tolerance must be positive");
  if (!(step_tol > 0.0)) throw InvalidArgument("step tolerance must be positive");
}

std::string to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::ConvergedToRoot: return "converged-to-root";
    case TerminalStatus::AuditViolation: return "audit-violation";
    case TerminalStatus::SingularJacobian: return "singular-jacobian";
    case TerminalStatus::MaxIterations: return "max-iterations";
    case TerminalStatus::Stalled: return "stalled";
  }
  return "unknown";
}

bool NewtonTrace::audits_passed() const {
  return std::all_of(audits.begin(), audits.end(), [](const StepAudit& a) {
    return a.step_bound_ok && a.ball_ok && a.limit_ok.value_or(true);
  });
}

NewtonTrace run_certified(const NonlinearSystem& sys, const MajorantModel& model, const RunOptions& opts) {
  opts.validate();
  const double eta_min = eta_of(sys);
  if (model.eta() < eta_min * (1.0 - kEtaRoundingSlack)) {
    throw InvalidArgument("model eta " + std::to_string(model.eta()) + " is below ||F'(x0)^{-1} F(x0)|| = " +
                          std::to_string(eta_min));
  }
  if (model.radius() > sys.radius() * (1.0 + 1e-12)) {
    throw InvalidArgument("model radius exceeds the domain radius of the system");
  }

  const auto seq = majorant_sequence(model);
  const auto fp = fixed_point_of(model, seq);
  std::string note;
  if (!fp) {
    note = "no minimal fixed point in ]eta, R] (majorant sequence " + to_string(seq.status) + ")";
    if (opts.audit_mode == AuditMode::Strict) throw NotCertified(note);
  }

  Envelope env{seq.values, fp ? std::optional<double>(fp->value) : std::nullopt, model.radius()};
  NewtonTrace trace = iterate(sys, opts, &env);
  if (!note.empty()) trace.note = note + (trace.note.empty() ? "" : "; " + trace.note);
  return trace;
}

NewtonTrace run_uncertified(const NonlinearSystem& sys, const RunOptions& opts) {
  return iterate(sys, opts, nullptr);
}

}  // namespace nkcert
