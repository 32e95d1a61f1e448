#pragma once

// Command-line front end: certify, run, sweep.
//
// Exit codes: 0 success, 1 operational error (bad flags, unreadable or
// malformed files, invalid arguments), 2 the command ran but the
// certificate (or the certified run) failed.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nkcert/io.hpp"

namespace nkcert {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFailed = 2;

/// Grid "a:b:step" -> a, a + step, ..., up to b inclusive (1e-9 step slack).
/// Throws InvalidArgument on malformed text, step <= 0 or a > b.
std::vector<double> parse_grid(const std::string& text);

/// Everything certify computes for one problem. eta_override may only
/// raise eta above eta_of(sys).
Report certify_problem(const LoadedProblem& problem, std::optional<double> eta_override = std::nullopt);

/// The certificate of `criterion` in `report`, if present.
const Certificate* find_certificate(const Report& report, Criterion criterion);

struct SweepRow {
  double ratio = 0.0;
  double l_eta = 0.0;
  bool kantorovich = false;
  bool new_condition = false;
  bool argyros = false;
};

/// One row per (ratio, l eta) cell, ratio-major, with l = 1, l0 = ratio,
/// eta = l eta and R = max(eta, 1 / l0).
std::vector<SweepRow> sweep(const std::vector<double>& ratios, const std::vector<double>& l_etas);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nkcert
