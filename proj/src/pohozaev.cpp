#include "poho/pohozaev.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

#include "poho/reduce.hpp"

namespace poho {

namespace {

double relative_scale_of(const EnergyBreakdown& b) {
  double s = 1.0;
  s = std::max(s, b.local_term);
  s = std::max(s, b.nonlocal_term);
  s = std::max(s, std::fabs(b.potential_term));
  return s;
}

// lhs/rhs assembled in one place so that the dilation check can negate the
// identical floating-point expression.
void fill_identity(PohozaevReport& rep, const OperatorParams& params) {
  const double n = static_cast<double>(params.dim);
  rep.pohozaev_lhs = params.alpha * (n - params.p) / params.p * rep.breakdown.local_term +
                     params.beta * (n - params.s * params.p) / params.p *
                         rep.breakdown.nonlocal_term;
  rep.pohozaev_rhs = n * rep.breakdown.potential_term;
  rep.pohozaev_residual = rep.pohozaev_lhs - rep.pohozaev_rhs;
  rep.relative_scale = relative_scale_of(rep.breakdown);
}

std::string growth_note(Nonlinearity::Growth g) {
  return g == Nonlinearity::Growth::f1 ? "growth=f1" : "growth=f2";
}

const char* case_tag(NonexistenceVerdict::Case c) {
  switch (c) {
    case NonexistenceVerdict::Case::local_case1: return "local_case1";
    case NonexistenceVerdict::Case::nonlocal_case2: return "nonlocal_case2";
    case NonexistenceVerdict::Case::mixed_case3: return "mixed_case3";
    case NonexistenceVerdict::Case::inconclusive: return "inconclusive";
  }
  return "?";
}

NonexistenceVerdict analyze(const OperatorParams& params, double q, bool system) {
  if (!(q > 1.0)) throw std::invalid_argument("nonexistence analysis: q must be > 1");

  const double n = static_cast<double>(params.dim);
  const double p = params.p;
  const double sp = params.s * p;

  NonexistenceVerdict v;
  v.coefficient_signs = {(n - p) / (n * p) - 1.0 / q, (n - sp) / (n * p) - 1.0 / q};
  if (p < n) v.p_star = n * p / (n - p);
  if (sp < n) v.p_s_star = n * p / (n - sp);

  const bool local_only = params.alpha == 1.0 && params.beta == 0.0;
  const bool nonlocal_only = params.alpha == 0.0;

  if (local_only) {
    if (!(p < n))
      throw std::invalid_argument("nonexistence analysis: the local case requires p < n");
    v.case_id = NonexistenceVerdict::Case::local_case1;
    v.conclusion = (q == *v.p_star)
                       ? NonexistenceVerdict::Conclusion::critical_consistent
                       : NonexistenceVerdict::Conclusion::only_trivial;
  } else if (nonlocal_only) {
    if (!(sp < n))
      throw std::invalid_argument("nonexistence analysis: the nonlocal case requires s*p < n");
    v.case_id = NonexistenceVerdict::Case::nonlocal_case2;
    v.conclusion = (q == *v.p_s_star)
                       ? NonexistenceVerdict::Conclusion::critical_consistent
                       : NonexistenceVerdict::Conclusion::only_trivial;
    if (!(p < n)) v.notes += "p >= n regime (only s*p < n is needed here); ";
  } else {
    if (!(p < n))
      throw std::invalid_argument("nonexistence analysis: the mixed case requires p < n");
    v.case_id = NonexistenceVerdict::Case::mixed_case3;
    if (q >= *v.p_star || q <= *v.p_s_star)
      v.conclusion = NonexistenceVerdict::Conclusion::only_trivial;
    else
      v.conclusion = NonexistenceVerdict::Conclusion::no_conclusion;
    if (params.beta != 1.0)
      v.notes += "beta != 1: the sign comparison is unchanged for any gamma > 0; ";
    if (v.conclusion == NonexistenceVerdict::Conclusion::no_conclusion)
      v.notes += "q inside (p_s*, p*), the open window; ";
  }

  if (q == p) v.notes += "eigenvalue case q = p; ";
  if (system)
    v.notes += "system verdict; assumes u, v of constant sign (not enforced numerically); ";
  v.notes += case_tag(v.case_id);
  return v;
}

}  // namespace

const char* NonexistenceVerdict::conclusion_name(Conclusion c) {
  switch (c) {
    case Conclusion::only_trivial: return "only_trivial";
    case Conclusion::critical_consistent: return "critical_consistent";
    case Conclusion::no_conclusion: return "no_conclusion";
  }
  return "?";
}

std::string PohozaevReport::to_kv_text() const {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "local_term = %.17g\n"
                "nonlocal_term = %.17g\n"
                "potential_term = %.17g\n"
                "tail_bound = %.17g\n"
                "pohozaev_lhs = %.17g\n"
                "pohozaev_rhs = %.17g\n"
                "pohozaev_residual = %.17g\n"
                "nehari_residual = %.17g\n"
                "relative_scale = %.17g\n"
                "relative_pohozaev = %.17g\n"
                "relative_nehari = %.17g\n"
                "decay_margin = %.17g\n",
                breakdown.local_term, breakdown.nonlocal_term,
                breakdown.potential_term, breakdown.tail_bound, pohozaev_lhs,
                pohozaev_rhs, pohozaev_residual, nehari_residual, relative_scale,
                relative_pohozaev(), relative_nehari(), decay_margin);
  std::string out(buf);
  out += "verdict_notes = " + verdict_notes + "\n";
  return out;
}

PohozaevReport pohozaev_residual(const GridFunction& u, const FinslerNorm& norm,
                                 const OperatorParams& params, const Nonlinearity& nl) {
  PohozaevReport rep;
  if (params.has_local()) rep.breakdown.local_term = local_energy(u, norm, params);
  if (params.has_nonlocal()) {
    const GagliardoResult g = gagliardo_seminorm(u, params, TailPolicy::zero_extension);
    rep.breakdown.nonlocal_term = g.value;
    rep.breakdown.tail_bound = g.tail_bound;
  }
  const PotentialResult pot = potential_integral(u, nl, params);
  rep.breakdown.potential_term = pot.f_integral;
  fill_identity(rep, params);
  rep.nehari_residual = params.alpha * rep.breakdown.local_term +
                        params.beta * rep.breakdown.nonlocal_term - pot.uf_integral;
  rep.decay_margin = u.decay_margin();
  rep.verdict_notes = growth_note(nl.growth_class(params.p));
  if (params.dim <= params.p)
    rep.verdict_notes += "; n <= p regime: coefficient (n-p)/p <= 0, identity still evaluated";
  return rep;
}

double nehari_residual(const GridFunction& u, const FinslerNorm& norm,
                       const OperatorParams& params, const Nonlinearity& nl) {
  return pohozaev_residual(u, norm, params, nl).nehari_residual;
}

DilationCheck dilation_derivative_check(const GridFunction& u, const FinslerNorm& norm,
                                        const OperatorParams& params,
                                        const Nonlinearity& nl, double fd_step) {
  if (!(fd_step > 0.0 && fd_step <= 0.1))
    throw std::invalid_argument("dilation_derivative_check: fd_step must lie in (0, 0.1]");

  const PohozaevReport base = pohozaev_residual(u, norm, params, nl);
  DilationCheck check;
  check.analytic = -(base.pohozaev_lhs - base.pohozaev_rhs);

  const auto energy_of = [&](double lambda) {
    const GridFunction v = dilate(u, lambda);
    double e = 0.0;
    if (params.has_local())
      e += params.alpha / params.p * local_energy(v, norm, params);
    if (params.has_nonlocal())
      e += params.beta / params.p *
           gagliardo_seminorm(v, params, TailPolicy::zero_extension).value;
    e -= potential_integral(v, nl, params).f_integral;
    return e;
  };

  check.finite_difference =
      (energy_of(1.0 + fd_step) - energy_of(1.0 - fd_step)) / (2.0 * fd_step);
  check.mismatch = std::fabs(check.analytic - check.finite_difference) /
                   std::max(1.0, std::fabs(check.analytic));
  return check;
}

NonexistenceVerdict nonexistence_analysis(const OperatorParams& params, double q) {
  return analyze(params, q, /*system=*/false);
}

NonexistenceVerdict system_nonexistence_analysis(const OperatorParams& params, double q) {
  return analyze(params, q, /*system=*/true);
}

PohozaevReport system_pohozaev_residual(const GridFunction& u, const GridFunction& v,
                                        const FinslerNorm& norm,
                                        const OperatorParams& params,
                                        const SystemNonlinearity& g) {
  if (!(u.spec() == v.spec()))
    throw std::invalid_argument("system_pohozaev_residual: components must share a grid");

  PohozaevReport rep;
  if (params.has_local())
    rep.breakdown.local_term =
        local_energy(u, norm, params) + local_energy(v, norm, params);
  if (params.has_nonlocal()) {
    const GagliardoResult gu = gagliardo_seminorm(u, params, TailPolicy::zero_extension);
    const GagliardoResult gv = gagliardo_seminorm(v, params, TailPolicy::zero_extension);
    rep.breakdown.nonlocal_term = gu.value + gv.value;
    rep.breakdown.tail_bound = gu.tail_bound + gv.tail_bound;
  }

  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const double cell = std::pow(spec.spacing(), spec.dim);
  std::vector<double> g_terms(total), pairing_terms(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    const double w = spec.quad_weight(kk);
    const double a = u.value(kk);
    const double b = v.value(kk);
    g_terms[kk] = w * g.g(a, b);
    pairing_terms[kk] = w * (a * g.gu(a, b) + b * g.gv(a, b));
  }
  rep.breakdown.potential_term = cell * pairwise_sum(g_terms);
  const double pairing = cell * pairwise_sum(pairing_terms);

  fill_identity(rep, params);
  rep.nehari_residual = params.alpha * rep.breakdown.local_term +
                        params.beta * rep.breakdown.nonlocal_term - pairing;
  rep.decay_margin = std::max(u.decay_margin(), v.decay_margin());
  rep.verdict_notes = growth_note(g.growth_class(params.p)) +
                      "; sign hypotheses on (u, v) recorded, not enforced";
  return rep;
}

}  // namespace poho
