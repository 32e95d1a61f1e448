#include "nkcert/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nkcert/error.hpp"

namespace nkcert {

namespace fs = std::filesystem;

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_into(e, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: out += format_real(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

double number_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Vector vector_field(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_number()) return Vector{v.get<double>()};
  if (!v.is_array() || v.empty()) throw ParseError(std::string("field '") + key + "' must be a non-empty array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string("field '") + key + "' must contain numbers");
    out.push_back(e.get<double>());
  }
  return Vector(std::move(out));
}

Json optional_real(const std::optional<double>& v) { return v ? real_to_json(*v) : Json(nullptr); }

std::optional<double> optional_real_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return real_from_json(j);
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

Json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw ParseError("expected a real number, got " + j.dump());
}

// ------------------------------------------------------------- moduli

ContinuityModulus parse_modulus(const Json& j, const NonlinearSystem* sys) {
  if (!j.is_object()) throw ParseError("modulus spec must be a JSON object");
  const auto kind = field<std::string>(j, "kind");
  if (kind == "linear") return ContinuityModulus::linear(number_field(j, "l0"));
  if (kind == "power") return ContinuityModulus::power(number_field(j, "c"), number_field(j, "p"));
  if (kind == "table") {
    const Json& raw = j.at("knots");
    if (!raw.is_array()) throw ParseError("'knots' must be an array of [r, w] pairs");
    std::vector<Knot> knots;
    for (const auto& k : raw) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
        throw ParseError("each knot must be a [r, w] pair of numbers");
      }
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return ContinuityModulus::table(std::move(knots));
  }
  if (kind == "estimate") {
    if (!sys) throw ParseError("an estimated modulus needs a problem to sample");
    std::vector<double> radii;
    if (j.contains("radii")) {
      radii = vector_field(j, "radii").to_std();
    } else {
      const int points = j.value("points", 16);
      if (points < 1) throw ParseError("'points' must be >= 1");
      for (int i = 1; i <= points; ++i) radii.push_back(sys->radius() * i / points);
    }
    const int dirs = j.value("dirs_per_radius", static_cast<int>(2 * sys->dimension() + 8));
    std::mt19937_64 rng(j.value("seed", std::uint64_t{0}));
    return estimate_modulus(*sys, radii, dirs, rng);
  }
  throw ParseError("unknown modulus kind '" + kind + "'");
}

ContinuityModulus load_modulus_file(const fs::path& path, const NonlinearSystem* sys) {
  return parse_modulus(read_json_file(path), sys);
}

Json to_json(const ContinuityModulus& m) {
  Json j;
  if (const auto* lin = m.as_linear()) {
    j["kind"] = "linear";
    j["l0"] = lin->l0;
  } else if (const auto* pw = m.as_power()) {
    j["kind"] = "power";
    j["c"] = pw->c;
    j["p"] = pw->p;
  } else {
    j["kind"] = "table";
    Json knots = Json::array();
    for (const auto& k : m.as_table()->knots()) knots.push_back(Json::array({k.r, k.w}));
    j["knots"] = std::move(knots);
  }
  return j;
}

// ------------------------------------------------------------ problems

LoadedProblem parse_problem(const Json& j) {
  if (!j.is_object()) throw ParseError("problem spec must be a JSON object");

  auto finish = [&](NonlinearSystem sys, std::optional<ContinuityModulus> modulus, std::optional<double> l0,
                    std::optional<double> l) {
    if (j.contains("modulus")) modulus = parse_modulus(j.at("modulus"), &sys);
    if (j.contains("lipschitz")) {
      const Json& lp = j.at("lipschitz");
      l0 = number_field(lp, "l0");
      l = number_field(lp, "l");
      LipschitzPair(*l0, *l);
    }
    return LoadedProblem{std::move(sys), std::move(modulus), l0, l};
  };

  if (j.contains("builtin")) {
    BuiltinOptions opts;
    if (j.contains("x0")) opts.x0 = vector_field(j, "x0");
    if (j.contains("R")) opts.radius = number_field(j, "R");
    auto b = load_builtin(field<std::string>(j, "builtin"), opts);
    return finish(std::move(b.system), std::move(b.analytic_modulus), b.analytic_l0, b.analytic_l);
  }

  const auto n = field<std::size_t>(j, "dimension");
  if (n < 1) throw ParseError("'dimension' must be >= 1");
  Vector x0 = vector_field(j, "x0");
  if (x0.size() != n) throw ParseError("'x0' must have 'dimension' entries");
  const double radius = number_field(j, "R");
  std::vector<std::string> components;
  const Json& expr = j.at("expression");
  if (expr.is_string()) {
    components.push_back(expr.get<std::string>());
  } else if (expr.is_array()) {
    for (const auto& e : expr) {
      if (!e.is_string()) throw ParseError("'expression' entries must be strings");
      components.push_back(e.get<std::string>());
    }
  } else {
    throw ParseError("'expression' must be a string or an array of strings");
  }
  auto sys = NonlinearSystem::from_expressions(j.value("name", std::string("expression")), components,
                                               std::move(x0), radius);
  return finish(std::move(sys), std::nullopt, std::nullopt, std::nullopt);
}

LoadedProblem load_problem_file(const fs::path& path) { return parse_problem(read_json_file(path)); }

// ------------------------------------------------------------- reports

Json to_json(const Certificate& c) {
  Json j;
  j["criterion"] = to_string(c.criterion);
  j["passed"] = c.passed;
  j["eta"] = real_to_json(c.eta);
  j["eta_max"] = real_to_json(c.eta_max);
  j["v_star"] = optional_real(c.v_star);
  j["heuristic"] = c.heuristic;
  Json diags = Json::array();
  for (const auto& [name, value] : c.diagnostics) diags.push_back(Json{{"name", name}, {"value", real_to_json(value)}});
  j["diagnostics"] = std::move(diags);
  return j;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.criterion = criterion_from_string(field<std::string>(j, "criterion"));
  c.passed = field<bool>(j, "passed");
  c.eta = real_from_json(j.at("eta"));
  c.eta_max = real_from_json(j.at("eta_max"));
  c.v_star = optional_real_from(j.at("v_star"));
  c.heuristic = j.value("heuristic", false);
  for (const auto& d : j.at("diagnostics")) {
    c.diagnostics.emplace_back(field<std::string>(d, "name"), real_from_json(d.at("value")));
  }
  return c;
}

Json to_json(const Report& r) {
  Json j;
  j["problem_name"] = r.problem_name;
  j["eta"] = real_to_json(r.eta);
  j["modulus_description"] = r.modulus_description;
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  j["certificates"] = std::move(certs);
  if (r.comparison) {
    j["comparison"] = Json{{"ratio", real_to_json(r.comparison->ratio)},
                           {"critical_ratio", real_to_json(r.comparison->critical_ratio)},
                           {"new_weaker_than_kantorovich", r.comparison->new_weaker_than_kantorovich}};
  } else {
    j["comparison"] = nullptr;
  }
  if (r.trace_summary) {
    const auto& t = *r.trace_summary;
    j["trace_summary"] = Json{{"iterations", t.iterations},
                              {"final_residual", real_to_json(t.final_residual)},
                              {"final_error_bound", optional_real(t.final_error_bound)},
                              {"audits_passed", t.audits_passed},
                              {"status", t.status}};
  } else {
    j["trace_summary"] = nullptr;
  }
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  r.problem_name = field<std::string>(j, "problem_name");
  r.eta = real_from_json(j.at("eta"));
  r.modulus_description = field<std::string>(j, "modulus_description");
  for (const auto& c : j.at("certificates")) r.certificates.push_back(certificate_from_json(c));
  if (j.contains("comparison") && !j.at("comparison").is_null()) {
    const Json& c = j.at("comparison");
    r.comparison = ComparisonVerdict{real_from_json(c.at("ratio")), real_from_json(c.at("critical_ratio")),
                                     field<bool>(c, "new_weaker_than_kantorovich")};
  }
  if (j.contains("trace_summary") && !j.at("trace_summary").is_null()) {
    const Json& t = j.at("trace_summary");
    r.trace_summary = TraceSummary{field<int>(t, "iterations"), real_from_json(t.at("final_residual")),
                                   optional_real_from(t.at("final_error_bound")), field<bool>(t, "audits_passed"),
                                   field<std::string>(t, "status")};
  }
  return r;
}

TraceSummary summarize(const NewtonTrace& trace) {
  return TraceSummary{static_cast<int>(trace.iterations()), trace.residual_norms.back(), trace.final_error_bound,
                      trace.audits_passed(), to_string(trace.status)};
}

// --------------------------------------------------------------- traces

void write_trace_csv(std::ostream& os, const NewtonTrace& trace) {
  const bool audited = !trace.majorant_values.empty();
  const std::size_t n = trace.iterates.front().size();

  os << "k";
  for (std::size_t i = 1; i <= n; ++i) os << ",x" << i;
  os << ",step_norm";
  if (audited) os << ",v_k,v_gap";
  os << ",residual";
  if (audited) os << ",step_bound_ok,ball_ok,limit_ok";
  os << '\n';

  auto flag = [](bool b) { return b ? "1" : "0"; };
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    os << k;
    for (double x : trace.iterates[k]) os << ',' << format_real(x);
    os << ',';
    if (k < trace.step_norms.size()) os << format_real(trace.step_norms[k]);
    if (audited) {
      // Record-mode runs without a fixed point have no v_k past the stored prefix.
      const double v = trace.majorant_values[k];
      os << ',';
      if (std::isfinite(v)) os << format_real(v);
      os << ',';
      if (trace.v_star && std::isfinite(v)) os << format_real(*trace.v_star - v);
    }
    os << ',' << format_real(trace.residual_norms[k]);
    if (audited) {
      if (k < trace.audits.size()) {
        const auto& a = trace.audits[k];
        os << ',' << flag(a.step_bound_ok) << ',' << flag(a.ball_ok) << ',';
        if (a.limit_ok) os << flag(*a.limit_ok);
      } else {
        os << ",,,";
      }
    }
    os << '\n';
  }
}

}  // namespace nkcert
