#pragma once

// File formats: problem and modulus specs (JSON), reports (JSON) and
// Newton traces (CSV).

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nkcert/criteria.hpp"
#include "nkcert/driver.hpp"
#include "nkcert/problem.hpp"

namespace nkcert {

using Json = nlohmann::ordered_json;

/// Serializes with insertion-ordered keys and reals at 17 significant
/// digits. Non-finite reals become the strings "inf", "-inf", "nan".
std::string dump_json(const Json& j, int indent = 2);

Json real_to_json(double v);
double real_from_json(const Json& j);

struct LoadedProblem {
  NonlinearSystem system;
  std::optional<ContinuityModulus> modulus;
  std::optional<double> l0;
  std::optional<double> l;
};

/// Problem spec:
///   {"builtin": name, ["x0": [...]], ["R": r], ["modulus": spec]}
///   {"dimension": n, "x0": [...], "R": r, "expression": ["...", ...],
///    ["name": s], ["modulus": spec], ["lipschitz": {"l0": a, "l": b}]}
LoadedProblem parse_problem(const Json& j);
LoadedProblem load_problem_file(const std::filesystem::path& path);

/// Modulus spec:
///   {"kind": "linear", "l0": a}
///   {"kind": "power", "c": c, "p": p}
///   {"kind": "table", "knots": [[r, w], ...]}
///   {"kind": "estimate", ["radii": [...] | "points": m], ["dirs_per_radius": d], ["seed": s]}
/// The "estimate" kind samples Jacobians of `sys` and needs it non-null.
ContinuityModulus parse_modulus(const Json& j, const NonlinearSystem* sys);
ContinuityModulus load_modulus_file(const std::filesystem::path& path, const NonlinearSystem* sys);

Json to_json(const ContinuityModulus& m);

struct TraceSummary {
  int iterations = 0;
  double final_residual = 0.0;
  std::optional<double> final_error_bound;
  bool audits_passed = false;
  std::string status;
  friend bool operator==(const TraceSummary&, const TraceSummary&) = default;
};

TraceSummary summarize(const NewtonTrace& trace);

struct Report {
  std::string problem_name;
  double eta = 0.0;
  std::string modulus_description;
  std::vector<Certificate> certificates;
  std::optional<ComparisonVerdict> comparison;
  std::optional<TraceSummary> trace_summary;
  friend bool operator==(const Report&, const Report&) = default;
};

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);
Json to_json(const Report& r);
Report report_from_json(const Json& j);

/// Header row then one row per iterate: k, x_k entries, step_norm, and for
/// certified traces v_k, v_gap, residual and audit flags. Cells with no
/// value (the step out of the last iterate) are left empty.
void write_trace_csv(std::ostream& os, const NewtonTrace& trace);

}  // namespace nkcert
