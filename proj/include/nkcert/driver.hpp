#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nkcert/majorant.hpp"
#include "nkcert/numerics.hpp"
#include "nkcert/problem.hpp"

namespace nkcert {

enum class AuditMode { Strict, Record };

struct RunOptions {
  int max_iterations = 100;
  double residual_tol = 1e-12;
  double step_tol = 1e-14;
  AuditMode audit_mode = AuditMode::Strict;

  void validate() const;
};

/// Slack added to every audit inequality, scaled by max(1, v*).
inline constexpr double kAuditSlack = 1e-9;

/// Relative slack when checking a supplied eta against eta_of(sys), so an
/// eta written out by hand (1/70 for 0.04/2.8) is not refused over rounding.
inline constexpr double kEtaRoundingSlack = 1e-12;

/// Audit of Newton step k (x_k -> x_{k+1}).
struct StepAudit {
  bool step_bound_ok = false;  // ||x_{k+1} - x_k|| <= v_{k+1} - v_k
  bool ball_ok = false;        // ||x_{k+1} - x0|| <= v*
  /// ||x_final - x_k|| <= v* - v_k, filled in once the run has converged.
  std::optional<bool> limit_ok;
};

enum class TerminalStatus { ConvergedToRoot, AuditViolation, SingularJacobian, MaxIterations, Stalled };

std::string to_string(TerminalStatus s);

struct NewtonTrace {
  std::vector<Vector> iterates;        // x_0 .. x_K
  std::vector<double> step_norms;      // K entries
  std::vector<double> majorant_values; // v_0 .. v_K (empty when uncertified)
  std::vector<double> residual_norms;  // K + 1 entries
  std::vector<StepAudit> audits;       // K entries (empty when uncertified)

  TerminalStatus status = TerminalStatus::MaxIterations;
  std::optional<Vector> x_star;
  std::optional<double> v_star;
  std::optional<double> final_error_bound;  // v* - v_K
  bool certified = false;
  std::string note;

  std::size_t iterations() const noexcept { return step_norms.size(); }
  bool audits_passed() const;
};

/// Newton iteration audited against the precomputed majorant sequence.
///
/// Requires model.eta() >= eta_of(sys). Without a passing fixed-point
/// certificate this throws NotCertified in Strict mode; in Record mode the
/// run proceeds and audits fall back to R and the partial sequence.
NewtonTrace run_certified(const NonlinearSystem& sys, const MajorantModel& model, const RunOptions& opts = {});

/// Plain Newton iteration without majorant audits.
NewtonTrace run_uncertified(const NonlinearSystem& sys, const RunOptions& opts = {});

}  // namespace nkcert
