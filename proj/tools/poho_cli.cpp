// Batch front door: parse a run specification, dispatch to the library and
// emit machine-readable CSV reports plus a human summary on stdout.
//
// Exit codes: 0 success, 2 validation error, 3 solver non-convergence,
// 4 internal numerical failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "poho/energy.hpp"
#include "poho/finsler.hpp"
#include "poho/grid.hpp"
#include "poho/pohozaev.hpp"
#include "poho/solver.hpp"

namespace {

constexpr const char* kReportHeader =
    "command,n,p,s,alpha,beta,q,local_term,nonlocal_term,potential_term,"
    "pohozaev_residual,nehari_residual,tail_bound,decay_margin,verdict";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n') c = ' ';
  }
  return s;
}

struct CommonOpts {
  std::string norm = "euclidean";
  int n = 1;
  double p = 2.0;
  double s = 0.5;
  double alpha = 1.0;
  double beta = 0.0;
  std::string f;
  std::string g;
  double q = 0.0;
  double L = 12.0;
  int N = 1024;
  std::string preset = "gaussian:1";
  std::string preset_v;
  std::string out;
  std::uint64_t seed = 12345;
  int samples = 10000;
  double fd_step = 1e-4;
  std::string tail = "zero";
  bool system = false;
  int max_iters = 50000;
  double tol = 1e-3;
  double step0 = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--norm", o.norm, "norm grammar: euclidean | hq:<q> | hlm:<lambda>,<mu>");
  cmd->add_option("--n", o.n, "space dimension");
  cmd->add_option("--p", o.p, "integrability exponent p > 1");
  cmd->add_option("--s", o.s, "fractional order s in (0,1)");
  cmd->add_option("--alpha", o.alpha, "local weight (0 or 1)");
  cmd->add_option("--beta", o.beta, "nonlocal weight");
  cmd->add_option("--out", o.out, "CSV output path (stdout block when omitted)");
}

void add_grid(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--L", o.L, "box half width");
  cmd->add_option("--N", o.N, "points per axis");
  cmd->add_option("--preset", o.preset,
                  "gaussian:<sigma> | bump:<radius> | sech | table:<path>");
}

void emit(const std::string& out_path, const std::string& header,
          const std::vector<std::string>& rows) {
  std::ostringstream csv;
  csv << header << '\n';
  for (const auto& r : rows) csv << r << '\n';
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output path '" + out_path + "'");
    f << csv.str();
  }
}

std::string report_row(const std::string& command, const CommonOpts& o,
                       std::optional<double> q, const poho::PohozaevReport& rep,
                       const std::string& verdict) {
  std::ostringstream row;
  row << command << ',' << o.n << ',' << fmt(o.p) << ',' << fmt(o.s) << ','
      << fmt(o.alpha) << ',' << fmt(o.beta) << ',' << (q ? fmt(*q) : "") << ','
      << fmt(rep.breakdown.local_term) << ',' << fmt(rep.breakdown.nonlocal_term)
      << ',' << fmt(rep.breakdown.potential_term) << ','
      << fmt(rep.pohozaev_residual) << ',' << fmt(rep.nehari_residual) << ','
      << fmt(rep.breakdown.tail_bound) << ',' << fmt(rep.decay_margin) << ','
      << sanitize(verdict);
  return row.str();
}

poho::GridFunction make_input(const CommonOpts& o, const std::string& preset_text) {
  const poho::Preset preset = poho::Preset::parse(preset_text);
  if (preset.kind == poho::Preset::Kind::CustomTable) return poho::load_table(preset.path);
  return poho::sample(preset, poho::GridSpec(o.n, o.L, o.N));
}

double nonlinearity_exponent(const poho::Nonlinearity& nl) { return nl.exponent(); }

int run_norm_check(const CommonOpts& o) {
  const poho::FinslerNorm norm = poho::FinslerNorm::parse(o.norm, o.n);
  const poho::PropertyReport rep =
      poho::check_minkowski_properties(norm, o.samples, o.seed);

  std::vector<std::string> rows;
  auto row = [&](const char* axiom, bool pass, double violation) {
    std::ostringstream r;
    r << "norm-check," << o.norm << ',' << o.n << ',' << o.samples << ',' << o.seed
      << ',' << axiom << ',' << (pass ? "pass" : "fail") << ',' << fmt(violation);
    rows.push_back(r.str());
  };
  row("positivity", rep.positivity_pass, rep.positivity_violation);
  row("homogeneity", rep.homogeneity_pass, rep.homogeneity_violation);
  row("comparability", rep.comparability_pass, 0.0);
  row("euler_relation", rep.euler_pass, rep.euler_violation);
  row("gradient_sign", rep.gradient_sign_pass, rep.gradient_sign_violation);
  row("gradient_fd", rep.gradient_fd_pass, rep.gradient_fd_violation);
  row("strict_convexity_probe", rep.strictly_convex, rep.convexity_min_gap);
  {
    std::ostringstream r;
    r << "norm-check," << o.norm << ',' << o.n << ',' << o.samples << ',' << o.seed
      << ",constants,c1=" << fmt(rep.c1_estimate) << ",c2=" << fmt(rep.c2_estimate);
    rows.push_back(r.str());
  }
  emit(o.out, "command,norm,n,samples,seed,check,result,value", rows);

  std::cout << "norm " << o.norm << " on R^" << o.n << ": "
            << (rep.axioms_pass() ? "all axioms pass" : "AXIOM FAILURE") << "\n"
            << "  c1 ~= " << rep.c1_estimate << ", c2 ~= " << rep.c2_estimate << "\n";
  if (!rep.strictly_convex)
    std::cout << "  warning: strict-convexity probe failed (flat segment detected, "
                 "min midpoint gap "
              << rep.convexity_min_gap << ")\n";
  return rep.axioms_pass() ? 0 : 4;
}

int run_report_command(const std::string& command, const CommonOpts& o) {
  const poho::OperatorParams params(o.n, o.p, o.s, o.alpha, o.beta);
  const poho::FinslerNorm norm = poho::FinslerNorm::parse(o.norm, o.n);

  if (command == "nonexistence") {
    if (!(o.q > 1.0)) throw std::invalid_argument("nonexistence: provide --q > 1");
    const poho::NonexistenceVerdict v =
        o.system ? poho::system_nonexistence_analysis(params, o.q)
                 : poho::nonexistence_analysis(params, o.q);
    poho::PohozaevReport empty;
    const std::string verdict = poho::NonexistenceVerdict::conclusion_name(v.conclusion);
    emit(o.out, kReportHeader,
         {report_row(command, o, o.q, empty, verdict + std::string("; ") + v.notes)});
    std::cout << "verdict " << verdict << "\n";
    if (v.p_star) std::cout << "  p* = " << *v.p_star << "\n";
    if (v.p_s_star) std::cout << "  p_s* = " << *v.p_s_star << "\n";
    std::cout << "  coefficients (" << v.coefficient_signs.first << ", "
              << v.coefficient_signs.second << ")\n  " << v.notes << "\n";
    return 0;
  }

  if (command == "system-pohozaev") {
    if (o.g.empty()) throw std::invalid_argument("system-pohozaev: provide --g dp:<q>,<lambda>,<mu>");
    const poho::SystemNonlinearity g = poho::SystemNonlinearity::parse(o.g);
    const poho::GridFunction u = make_input(o, o.preset);
    const poho::GridFunction v =
        make_input(o, o.preset_v.empty() ? o.preset : o.preset_v);
    const poho::PohozaevReport rep =
        poho::system_pohozaev_residual(u, v, norm, params, g);
    emit(o.out, kReportHeader,
         {report_row(command, o, g.exponent(), rep, rep.verdict_notes)});
    std::cout << rep.to_kv_text();
    return 0;
  }

  if (o.f.empty()) throw std::invalid_argument(command + ": provide --f sp:<q>,<lambda>,<mu> | pmm:<q>,<m>");
  const poho::Nonlinearity nl = poho::Nonlinearity::parse(o.f);
  const poho::GridFunction u = make_input(o, o.preset);

  if (command == "dilation-check") {
    const poho::DilationCheck check =
        poho::dilation_derivative_check(u, norm, params, nl, o.fd_step);
    const poho::PohozaevReport rep = poho::pohozaev_residual(u, norm, params, nl);
    std::ostringstream verdict;
    verdict << "analytic=" << fmt(check.analytic)
            << "; fd=" << fmt(check.finite_difference)
            << "; mismatch=" << fmt(check.mismatch);
    emit(o.out, kReportHeader,
         {report_row(command, o, nonlinearity_exponent(nl), rep, verdict.str())});
    std::cout << "analytic dilation derivative  " << check.analytic << "\n"
              << "finite-difference derivative  " << check.finite_difference << "\n"
              << "relative mismatch             " << check.mismatch << "\n";
    return 0;
  }

  // `energy` and `pohozaev` share the full report.
  const poho::PohozaevReport rep = poho::pohozaev_residual(u, norm, params, nl);
  emit(o.out, kReportHeader,
       {report_row(command, o, nonlinearity_exponent(nl), rep, rep.verdict_notes)});
  std::cout << rep.to_kv_text();
  return 0;
}

int run_solve(const CommonOpts& o) {
  const poho::OperatorParams params(o.n, o.p, o.s, o.alpha, o.beta);
  const poho::FinslerNorm norm = poho::FinslerNorm::parse(o.norm, o.n);
  if (o.f.empty()) throw std::invalid_argument("solve: provide --f pmm:<q>,<m>");
  const poho::Nonlinearity nl = poho::Nonlinearity::parse(o.f);

  poho::SolverConfig cfg(params, norm, nl, poho::GridSpec(o.n, o.L, o.N));
  cfg.init = poho::Preset::parse(o.preset);
  cfg.max_iters = o.max_iters;
  cfg.tol_grad = o.tol;
  cfg.step0 = o.step0;

  const poho::GroundState gs = poho::ground_state(cfg);
  const poho::PohozaevReport rep = poho::pohozaev_residual(gs.u, norm, params, nl);

  std::ostringstream verdict;
  verdict << (gs.trace.converged ? "converged" : "not_converged")
          << "; iters=" << gs.trace.iterations_used
          << "; weak_residual=" << fmt(gs.trace.final_grad_norm);
  emit(o.out, kReportHeader,
       {report_row("solve", o, nl.exponent(), rep, verdict.str())});

  std::cout << (gs.trace.converged ? "converged" : "NOT CONVERGED") << " after "
            << gs.trace.iterations_used << " iterations, weak residual "
            << gs.trace.final_grad_norm << "\n"
            << rep.to_kv_text();
  return gs.trace.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("POHOZAEV_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) omp_set_num_threads(t);
  }

  CLI::App app{"energy functionals, Pohozaev/Nehari identity reports, ground states "
               "and nonexistence case analysis for anisotropic and fractional "
               "p-Laplace operators"};
  app.require_subcommand(1);

  CommonOpts o;

  CLI::App* norm_check = app.add_subcommand("norm-check", "sampled norm-axiom check");
  add_common(norm_check, o);
  norm_check->add_option("--samples", o.samples, "sample count");
  norm_check->add_option("--seed", o.seed, "sampling seed");

  CLI::App* energy = app.add_subcommand("energy", "energy breakdown of a preset");
  CLI::App* pohozaev = app.add_subcommand("pohozaev", "Pohozaev/Nehari identity report");
  CLI::App* dilation = app.add_subcommand("dilation-check",
                                          "dilation derivative vs identity algebra");
  CLI::App* nonexist = app.add_subcommand("nonexistence", "exponent case analysis");
  CLI::App* system_poho = app.add_subcommand("system-pohozaev",
                                             "two-component identity report");
  CLI::App* solve = app.add_subcommand("solve", "variational ground state");

  for (CLI::App* cmd : {energy, pohozaev, dilation, system_poho, solve}) {
    add_common(cmd, o);
    add_grid(cmd, o);
  }
  for (CLI::App* cmd : {energy, pohozaev, dilation, solve})
    cmd->add_option("--f", o.f, "nonlinearity: sp:<q>,<lambda>,<mu> | pmm:<q>,<m>");
  dilation->add_option("--fd-step", o.fd_step, "central-difference step in (0, 0.1]");
  system_poho->add_option("--g", o.g, "system potential: dp:<q>,<lambda>,<mu>");
  system_poho->add_option("--preset-v", o.preset_v, "second component preset");

  add_common(nonexist, o);
  nonexist->add_option("--q", o.q, "nonlinearity exponent");
  nonexist->add_flag("--system", o.system, "use the system case analysis");

  solve->add_option("--max-iters", o.max_iters, "iteration cap");
  solve->add_option("--tol", o.tol, "weak-residual stopping threshold");
  solve->add_option("--step0", o.step0, "initial Armijo step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (norm_check->parsed()) return run_norm_check(o);
    if (energy->parsed()) return run_report_command("energy", o);
    if (pohozaev->parsed()) return run_report_command("pohozaev", o);
    if (dilation->parsed()) return run_report_command("dilation-check", o);
    if (nonexist->parsed()) return run_report_command("nonexistence", o);
    if (system_poho->parsed()) return run_report_command("system-pohozaev", o);
    if (solve->parsed()) return run_solve(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const poho::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
