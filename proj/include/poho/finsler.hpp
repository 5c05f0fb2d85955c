#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poho {

/// A Finsler-Minkowski norm on R^n: positive away from the origin,
/// absolutely 1-homogeneous, comparable to the Euclidean norm, and C^1 off
/// the origin. Three families are built in:
///
///   euclidean        |x|
///   lq(q)            (sum_i |x_i|^q)^(1/q), q >= 1
///   quartic_mix(l,m) sqrt(l * sqrt(sum_i x_i^4) + m * sum_i x_i^2)
///
/// Gradients are closed-form per family (no autodiff). lq with q == 2
/// shares the Euclidean code path, so the two evaluate bit-identically.
/// q == 1 is accepted for probing; it fails the strict-convexity probe.
///
/// Comparability constants c_lower <= H(x)/|x| <= c_upper are estimated at
/// construction by extremizing over a deterministic sphere sample (axes,
/// sign diagonals, and a low-discrepancy sweep).
class FinslerNorm {
 public:
  enum class Kind { Euclidean, Lq, QuarticMix };

  static FinslerNorm euclidean(int dim);
  static FinslerNorm lq(double q, int dim);
  static FinslerNorm quartic_mix(double lambda, double mu, int dim);

  /// Grammar: `euclidean`, `hq:<q>`, `hlm:<lambda>,<mu>`.
  static FinslerNorm parse(std::string_view text, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double exponent() const { return q_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  double eval(std::span<const double> x) const;

  /// Gradient of H at x != 0. Satisfies x . grad(x) = eval(x) and
  /// grad(t x) = sign(t) grad(x). Throws std::domain_error at the origin.
  void grad(std::span<const double> x, std::span<double> out) const;
  std::vector<double> grad(std::span<const double> x) const;

  double c_lower() const { return c_lower_; }
  double c_upper() const { return c_upper_; }

  /// Round-trips through parse().
  std::string grammar_string() const;

 private:
  FinslerNorm(Kind kind, int dim, double q, double lambda, double mu);
  void estimate_constants();

  Kind kind_;
  int dim_;
  double q_ = 0.0;       // Lq
  double lambda_ = 0.0;  // QuarticMix
  double mu_ = 0.0;      // QuarticMix
  double c_lower_ = 1.0;
  double c_upper_ = 1.0;
};

/// Outcome of the sampled norm-axiom check. Violations are relative except
/// positivity_violation, which is absolute.
struct PropertyReport {
  bool positivity_pass = false;        // H(x) > 0 for x != 0, H(0) = 0
  bool homogeneity_pass = false;       // H(t x) = |t| H(x)
  bool comparability_pass = false;     // finite 0 < c_lower <= c_upper
  bool euler_pass = false;             // x . grad H(x) = H(x)
  bool gradient_sign_pass = false;     // grad H(t x) = sign(t) grad H(x)
  bool gradient_fd_pass = false;       // grad matches central differences

  double positivity_violation = 0.0;
  double homogeneity_violation = 0.0;
  double euler_violation = 0.0;
  double gradient_sign_violation = 0.0;
  double gradient_fd_violation = 0.0;

  double c1_estimate = 0.0;
  double c2_estimate = 0.0;
  double gradient_sup = 0.0;  // sup |grad H| over samples

  // Midpoint probe along random unit-sphere segments. A flat facet (e.g.
  // lq with q = 1) drives the gap to zero; reported as a warning, not a
  // failure, since downstream code only consumes positivity, homogeneity,
  // comparability and the C^1 gradient.
  bool strictly_convex = false;
  double convexity_min_gap = 0.0;

  int sample_count = 0;
  std::uint64_t seed = 0;

  bool axioms_pass() const {
    return positivity_pass && homogeneity_pass && comparability_pass &&
           euler_pass && gradient_sign_pass && gradient_fd_pass;
  }
};

/// Deterministic given (norm, sample_count, seed).
PropertyReport check_minkowski_properties(const FinslerNorm& norm,
                                          int sample_count,
                                          std::uint64_t seed);

}  // namespace poho
