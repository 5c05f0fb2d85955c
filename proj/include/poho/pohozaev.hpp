#pragma once

#include <optional>
#include <string>
#include <utility>

#include "poho/energy.hpp"

namespace poho {

/// Everything needed to judge the Pohozaev and Nehari identities on a
/// discretized function:
///
///   pohozaev_lhs  = alpha (n-p)/p * local + beta (n-sp)/p * nonlocal
///   pohozaev_rhs  = n * potential
///   nehari        = alpha local + beta nonlocal - integral of u f(u)
///
/// Residuals are signed and reported raw; relative_scale =
/// max(local, nonlocal, |potential|, 1) normalizes them, since the terms
/// can differ by orders of magnitude.
struct PohozaevReport {
  EnergyBreakdown breakdown;
  double pohozaev_lhs = 0.0;
  double pohozaev_rhs = 0.0;
  double pohozaev_residual = 0.0;
  double nehari_residual = 0.0;
  double relative_scale = 1.0;
  double decay_margin = 0.0;
  std::string verdict_notes;

  double relative_pohozaev() const { return pohozaev_residual / relative_scale; }
  double relative_nehari() const { return nehari_residual / relative_scale; }

  /// Flat key-value text, one `key = value` per line.
  std::string to_kv_text() const;
};

PohozaevReport pohozaev_residual(const GridFunction& u, const FinslerNorm& norm,
                                 const OperatorParams& params,
                                 const Nonlinearity& nl);

double nehari_residual(const GridFunction& u, const FinslerNorm& norm,
                       const OperatorParams& params, const Nonlinearity& nl);

/// Verifies the identity's algebra against the exact discrete scaling laws:
/// with e(lambda) the energy of the dilated function,
///
///   e(lambda) = alpha lambda^{p-n}/p E_loc + beta lambda^{sp-n}/p E_nl
///               - lambda^{-n} integral F,
///
/// analytic = e'(1) and equals -pohozaev_residual by construction (same
/// floating-point terms, negated). finite_difference evaluates e through
/// dilate() at 1 +- fd_step.
struct DilationCheck {
  double analytic = 0.0;
  double finite_difference = 0.0;
  double mismatch = 0.0;  // |analytic - fd| / max(1, |analytic|)
};

DilationCheck dilation_derivative_check(const GridFunction& u,
                                        const FinslerNorm& norm,
                                        const OperatorParams& params,
                                        const Nonlinearity& nl, double fd_step);

/// Exponent case analysis for f(t) = lambda t_+^{q-1} - mu t_-^{q-1}.
/// Verdicts are pure exponent arithmetic (statements about exact
/// solutions); they are never inferred from numerical residuals.
struct NonexistenceVerdict {
  enum class Case { local_case1, nonlocal_case2, mixed_case3, inconclusive };
  enum class Conclusion { only_trivial, critical_consistent, no_conclusion };

  Case case_id = Case::inconclusive;
  std::optional<double> p_star;    // np/(n-p), defined iff p < n
  std::optional<double> p_s_star;  // np/(n-sp), defined iff sp < n

  // ((n-p)/(np) - 1/q, (n-sp)/(np) - 1/q), the comparison coefficients.
  std::pair<double, double> coefficient_signs{0.0, 0.0};

  Conclusion conclusion = Conclusion::no_conclusion;
  std::string notes;

  static const char* conclusion_name(Conclusion c);
};

NonexistenceVerdict nonexistence_analysis(const OperatorParams& params, double q);

/// Same exponent arithmetic; the system cases coincide with the scalar
/// ones. Sign hypotheses on (u, v) are recorded in notes, not enforced.
NonexistenceVerdict system_nonexistence_analysis(const OperatorParams& params,
                                                 double q);

/// Pohozaev report for the two-component system with potential g(u, v):
/// both components' local and nonlocal terms summed, rhs = n integral g,
/// Nehari pairing integral of (u g_u + v g_v).
PohozaevReport system_pohozaev_residual(const GridFunction& u,
                                        const GridFunction& v,
                                        const FinslerNorm& norm,
                                        const OperatorParams& params,
                                        const SystemNonlinearity& g);

}  // namespace poho
