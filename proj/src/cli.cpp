#include "nkcert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

std::string fmt6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt6(const std::optional<double>& v) { return v ? fmt6(*v) : "-"; }

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw InvalidArgument("malformed " + what + " '" + text + "'");
  }
  return v;
}

// Certificate that fails because eta already exceeds the radius.
Certificate beyond_radius(Criterion criterion, const ContinuityModulus& modulus, double eta, double radius) {
  const MajorantModel probe(modulus, 0.0, radius);
  Certificate c = criterion == Criterion::Argyros ? check_argyros(probe) : check_new_general(probe);
  c.passed = false;
  c.eta = eta;
  c.v_star.reset();
  c.diagnostics = {{"eta_exceeds_R", 1.0}, {"R", radius}};
  return c;
}

void print_report(std::ostream& out, const Report& r) {
  out << "problem: " << r.problem_name << '\n';
  out << "eta:     " << fmt6(r.eta) << '\n';
  out << "modulus: " << r.modulus_description << '\n';
  out << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %-6s %-12s %-12s %s\n", "criterion", "result", "eta_max", "v*", "note");
  out << line;
  for (const auto& c : r.certificates) {
    std::snprintf(line, sizeof line, "%-14s %-6s %-12s %-12s %s\n", to_string(c.criterion).c_str(),
                  c.passed ? "pass" : "fail", fmt6(c.eta_max).c_str(), fmt6(c.v_star).c_str(),
                  c.heuristic ? "heuristic (estimated modulus)" : "");
    out << line;
  }
  out << '\n';
  out << "thresholds: kantorovich l*eta <= 0.5; new-condition l0*eta <= 3-2*sqrt(2) = "
      << fmt6(thresholds::kNewCondition) << "; argyros l0*eta <= 0.1 (earlier variant (2-sqrt(3))/2 = "
      << fmt6(thresholds::kArgyrosEarlier) << ")\n";
  if (r.comparison) {
    out << "ratio l0/l = " << fmt6(r.comparison->ratio) << ", critical 6-4*sqrt(2) = "
        << fmt6(r.comparison->critical_ratio) << ": new condition "
        << (r.comparison->new_weaker_than_kantorovich ? "is" : "is not") << " weaker than kantorovich\n";
  }
}

void write_json_file(const std::string& path, const Report& r) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << dump_json(to_json(r)) << '\n';
}

struct CommonArgs {
  std::string problem_file;
  std::string modulus_file;
  std::optional<double> eta;
  std::string json_path;
};

LoadedProblem load_with_override(const CommonArgs& a) {
  LoadedProblem p = load_problem_file(a.problem_file);
  if (!a.modulus_file.empty()) p.modulus = load_modulus_file(a.modulus_file, &p.system);
  return p;
}

int cmd_certify(const CommonArgs& a, std::ostream& out) {
  const LoadedProblem p = load_with_override(a);
  const Report r = certify_problem(p, a.eta);
  print_report(out, r);
  if (!a.json_path.empty()) write_json_file(a.json_path, r);
  const Certificate* c = find_certificate(r, Criterion::NewCondition);
  return c && c->passed ? kExitOk : kExitFailed;
}

struct RunArgs {
  bool uncertified = false;
  int max_iter = RunOptions{}.max_iterations;
  double tol = RunOptions{}.residual_tol;
  std::string trace_path;
  std::string audit = "strict";
};

int cmd_run(const CommonArgs& a, const RunArgs& ra, std::ostream& out, std::ostream& err) {
  RunOptions opts;
  opts.max_iterations = ra.max_iter;
  opts.residual_tol = ra.tol;
  opts.audit_mode = ra.audit == "record" ? AuditMode::Record : AuditMode::Strict;
  opts.validate();

  const LoadedProblem p = load_with_override(a);
  NewtonTrace trace;
  Report r;
  if (ra.uncertified) {
    r.problem_name = p.system.name();
    r.eta = a.eta.value_or(eta_of(p.system));
    r.modulus_description = p.modulus ? p.modulus->describe() : "none";
    trace = run_uncertified(p.system, opts);
  } else {
    r = certify_problem(p, a.eta);
    const Certificate* c = find_certificate(r, Criterion::NewCondition);
    const double radius = std::min(p.system.radius(), p.modulus->max_radius());
    if (r.eta > radius || (!c->passed && opts.audit_mode == AuditMode::Strict)) {
      err << "not certified: the new condition fails for eta = " << fmt6(r.eta) << " (eta_max = " << fmt6(c->eta_max)
          << ")\n";
      return kExitFailed;
    }
    try {
      trace = run_certified(p.system, MajorantModel(*p.modulus, r.eta, radius), opts);
    } catch (const NotCertified& e) {
      err << "not certified: " << e.what() << '\n';
      return kExitFailed;
    }
  }
  r.trace_summary = summarize(trace);

  out << "problem:    " << r.problem_name << '\n';
  out << "status:     " << to_string(trace.status) << '\n';
  out << "iterations: " << trace.iterations() << '\n';
  out << "residual:   " << fmt6(trace.residual_norms.back()) << '\n';
  if (trace.certified) {
    out << "v*:         " << fmt6(trace.v_star) << '\n';
    out << "error bound " << fmt6(trace.final_error_bound) << '\n';
    out << "audits:     " << (trace.audits_passed() ? "passed" : "violated") << '\n';
  }
  if (!trace.note.empty()) out << "note:       " << trace.note << '\n';

  if (!ra.trace_path.empty()) {
    std::ofstream f(ra.trace_path);
    if (!f) throw InvalidArgument("cannot write '" + ra.trace_path + "'");
    write_trace_csv(f, trace);
  }
  if (!a.json_path.empty()) write_json_file(a.json_path, r);

  const bool ok = trace.status == TerminalStatus::ConvergedToRoot && (ra.uncertified || trace.audits_passed());
  return ok ? kExitOk : kExitFailed;
}

int cmd_sweep(const std::string& ratio_text, const std::string& leta_text, const std::string& out_path,
              std::ostream& out) {
  const auto ratios = parse_grid(ratio_text);
  const auto letas = parse_grid(leta_text);
  for (double r : ratios)
    if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("ratio values must lie in ]0, 1]");
  for (double v : letas)
    if (!(v > 0.0)) throw InvalidArgument("l*eta values must be positive");
  const auto rows = sweep(ratios, letas);
  if (out_path.empty()) {
    write_sweep_csv(out, rows);
  } else {
    std::ofstream f(out_path);
    if (!f) throw InvalidArgument("cannot write '" + out_path + "'");
    write_sweep_csv(f, rows);
  }
  return kExitOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
    throw InvalidArgument("grid must look like a:b:step, got '" + text + "'");
  }
  const double a = parse_real(text.substr(0, c1), "grid start");
  const double b = parse_real(text.substr(c1 + 1, c2 - c1 - 1), "grid end");
  const double step = parse_real(text.substr(c2 + 1), "grid step");
  if (!(step > 0.0)) throw InvalidArgument("grid step must be > 0");
  if (a > b) throw InvalidArgument("empty grid '" + text + "'");
  const double count = std::floor((b - a) / step + 1e-9) + 1.0;
  if (count > 1e7) throw InvalidArgument("grid '" + text + "' is too large");
  std::vector<double> out;
  for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(a + i * step);
  return out;
}

const Certificate* find_certificate(const Report& report, Criterion criterion) {
  for (const auto& c : report.certificates)
    if (c.criterion == criterion) return &c;
  return nullptr;
}

Report certify_problem(const LoadedProblem& problem, std::optional<double> eta_override) {
  const NonlinearSystem& sys = problem.system;
  if (!problem.modulus) throw InvalidArgument("no continuity modulus: give one in the problem file or with --modulus");
  const ContinuityModulus& modulus = *problem.modulus;

  const double eta_min = eta_of(sys);
  double eta = eta_min;
  if (eta_override) {
    if (!std::isfinite(*eta_override) || *eta_override < eta_min * (1.0 - kEtaRoundingSlack)) {
      throw InvalidArgument("--eta may only raise eta above ||F'(x0)^{-1} F(x0)|| = " + fmt6(eta_min));
    }
    eta = *eta_override;
  }
  const double radius = std::min(sys.radius(), modulus.max_radius());

  Report r;
  r.problem_name = sys.name();
  r.eta = eta;
  r.modulus_description = modulus.describe();

  if (problem.l) r.certificates.push_back(check_kantorovich(LipschitzPair(*problem.l, *problem.l), eta));

  const auto* lin = modulus.as_linear();
  if (lin) {
    const double l = std::max(lin->l0, problem.l.value_or(lin->l0));
    Certificate c = check_new_lipschitz(LipschitzPair(lin->l0, l), eta, radius);
    c.heuristic = modulus.lower_estimate();
    r.certificates.push_back(std::move(c));
  } else if (eta > radius) {
    r.certificates.push_back(beyond_radius(Criterion::NewCondition, modulus, eta, radius));
  } else {
    r.certificates.push_back(check_new_general(MajorantModel(modulus, eta, radius)));
  }

  if (eta > radius) {
    r.certificates.push_back(beyond_radius(Criterion::Argyros, modulus, eta, radius));
  } else {
    r.certificates.push_back(check_argyros(MajorantModel(modulus, eta, radius)));
  }

  if (problem.l0 && problem.l && *problem.l > 0.0) {
    r.comparison = compare_criteria(LipschitzPair(*problem.l0, *problem.l), eta, radius).verdict;
  }
  return r;
}

std::vector<SweepRow> sweep(const std::vector<double>& ratios, const std::vector<double>& l_etas) {
  std::vector<SweepRow> rows;
  rows.reserve(ratios.size() * l_etas.size());
  for (double ratio : ratios) {
    for (double l_eta : l_etas) {
      const double eta = l_eta;
      const double radius = std::max(eta, 1.0 / ratio);
      const LipschitzPair pair(ratio, 1.0);
      SweepRow row{ratio, l_eta};
      row.kantorovich = check_kantorovich(pair, eta).passed;
      row.new_condition = check_new_lipschitz(pair, eta, radius).passed;
      row.argyros = check_argyros(MajorantModel(ContinuityModulus::linear(ratio), eta, radius)).passed;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  auto cell = [](bool b) { return b ? "pass" : "fail"; };
  os << "ratio,l_eta,l0_eta,kantorovich,new,argyros\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g", r.ratio, r.l_eta, r.ratio * r.l_eta);
    os << buf << ',' << cell(r.kantorovich) << ',' << cell(r.new_condition) << ',' << cell(r.argyros) << '\n';
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semilocal convergence certificates for Newton's method", "nkcert"};
  app.require_subcommand(1);

  CommonArgs certify_args;
  auto* certify = app.add_subcommand("certify", "Check the convergence criteria at x0");
  certify->add_option("file", certify_args.problem_file, "Problem spec (JSON)")->required();
  certify->add_option("--modulus", certify_args.modulus_file, "Modulus spec overriding the problem's");
  certify->add_option("--eta", certify_args.eta, "Use this eta instead of the computed one (may only increase it)");
  certify->add_option("--json", certify_args.json_path, "Write the report as JSON");

  CommonArgs run_common;
  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run Newton's method, audited against the majorant sequence");
  run->add_option("file", run_common.problem_file, "Problem spec (JSON)")->required();
  run->add_flag("--uncertified", run_args.uncertified, "Plain Newton without audits");
  run->add_option("--max-iter", run_args.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  run->add_option("--tol", run_args.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  run->add_option("--trace", run_args.trace_path, "Write the iterates as CSV");
  run->add_option("--audit", run_args.audit, "strict aborts on the first violation, record keeps going")
      ->check(CLI::IsMember({"strict", "record"}));
  run->add_option("--modulus", run_common.modulus_file, "Modulus spec overriding the problem's");
  run->add_option("--eta", run_common.eta, "Use this eta instead of the computed one (may only increase it)");
  run->add_option("--json", run_common.json_path, "Write the report as JSON");

  std::string ratio_text;
  std::string leta_text;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Which criteria pass over an (l0/l, l*eta) grid, as CSV");
  sweep_cmd->add_option("--ratio", ratio_text, "l0/l grid a:b:step")->required();
  sweep_cmd->add_option("--leta", leta_text, "l*eta grid a:b:step")->required();
  sweep_cmd->add_option("--out", sweep_out, "Write the CSV here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitError;
  }

  try {
    if (certify->parsed()) return cmd_certify(certify_args, out);
    if (run->parsed()) return cmd_run(run_common, run_args, out, err);
    return cmd_sweep(ratio_text, leta_text, sweep_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace nkcert
