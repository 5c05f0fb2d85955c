#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poho/finsler.hpp"
#include "poho/grid.hpp"

namespace poho {

/// Dimension and exponents of the operator
///   alpha * (anisotropic p-Laplacian) + beta * (fractional p-Laplacian).
/// Admissible weight pairs: (1,0), (1,gamma>0), (0,1). s lives in (0,1)
/// and only matters when beta > 0.
struct OperatorParams {
  OperatorParams(int dim, double p, double s, double alpha, double beta);

  int dim;
  double p;
  double s;
  double alpha;
  double beta;

  bool has_local() const { return alpha != 0.0; }
  bool has_nonlocal() const { return beta != 0.0; }
};

/// Scalar nonlinearity f with antiderivative F, F(0) = 0.
///
///   signed_power(q, lambda, mu):  f(t) = lambda t_+^{q-1} - mu t_-^{q-1}
///                                 F(t) = lambda t_+^q / q + mu t_-^q / q
///   power_minus_mass(q, m):       f(t) = |t|^{q-2} t - m |t|^{p-2} t
///                                 F(t) = |t|^q / q - m |t|^p / p
///
/// power_minus_mass needs p from the operator parameters, so f and F take
/// it as an argument (ignored by signed_power).
class Nonlinearity {
 public:
  enum class Kind { SignedPower, PowerMinusMass };
  enum class Growth { f1, f2 };

  static Nonlinearity signed_power(double q, double lambda, double mu);
  static Nonlinearity power_minus_mass(double q, double m);

  /// Grammar: `sp:<q>,<lambda>,<mu>`, `pmm:<q>,<m>`.
  static Nonlinearity parse(std::string_view text);

  Kind kind() const { return kind_; }
  double exponent() const { return q_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double mass() const { return mass_; }

  double f(double t, double p) const;
  double F(double t, double p) const;

  /// f1 (pure (p-1)-growth) exactly when q == p.
  Growth growth_class(double p) const;

  std::string grammar_string() const;

 private:
  Kind kind_;
  double q_ = 0.0;
  double lambda_ = 0.0;
  double mu_ = 0.0;
  double mass_ = 0.0;
};

/// g(t,s) = (lambda |t|^q + mu |s|^q) / q with closed-form partials.
/// Satisfies t g_t + s g_s = q g.
class SystemNonlinearity {
 public:
  static SystemNonlinearity decoupled_powers(double q, double lambda, double mu);

  /// Grammar: `dp:<q>,<lambda>,<mu>`.
  static SystemNonlinearity parse(std::string_view text);

  double exponent() const { return q_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  double g(double t, double s) const;
  double gu(double t, double s) const;
  double gv(double t, double s) const;

  Nonlinearity::Growth growth_class(double p) const;

  std::string grammar_string() const;

 private:
  SystemNonlinearity(double q, double lambda, double mu);
  double q_, lambda_, mu_;
};

enum class DiagonalPolicy { exclude };
enum class TailPolicy { zero_extension, reported_bound };

struct EnergyBreakdown {
  double local_term = 0.0;      // ||H(grad u)||_p^p
  double nonlocal_term = 0.0;   // [u]_{s,p}^p (zero-extension tail included)
  double potential_term = 0.0;  // integral of F(u) (or g(u,v))
  double tail_bound = 0.0;
  DiagonalPolicy diagonal_policy = DiagonalPolicy::exclude;
};

/// integral of H(grad u)^p.
double local_energy(const GridFunction& u, const FinslerNorm& norm,
                    const OperatorParams& params);

struct GagliardoResult {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Gagliardo seminorm [u]_{s,p}^p by double tensor-product quadrature over
/// node pairs, diagonal excluded. In dimension 1 the excluded strip
/// |x-y| <= h/2 is restored to first order through its semi-analytic value
/// |u'(x)|^p 2(h/2)^{p-sp}/(p-sp); without it the sum converges only like
/// h^{p-sp}. Pairs with one point outside the box are covered by the
/// one-point tail integral T(x) of the kernel over the box complement:
///
///   tail = 2 * integral of |u(x)|^p T(x) dx.
///
/// zero_extension adds the tail to value; reported_bound leaves value as
/// the box-box part. tail_bound carries the tail term in both modes.
GagliardoResult gagliardo_seminorm(const GridFunction& u,
                                   const OperatorParams& params,
                                   TailPolicy policy);

/// T(x) per node: exact in dimension 1; for dim >= 2 a conservative radial
/// bound. Nodes on the box edge use the half-cell distance h/2 (the
/// pointwise integral diverges there).
std::vector<double> tail_integrals(const GridSpec& spec,
                                   const OperatorParams& params);

struct PotentialResult {
  double f_integral = 0.0;   // integral of F(u)
  double uf_integral = 0.0;  // integral of u f(u), for the Nehari identity
};

PotentialResult potential_integral(const GridFunction& u,
                                   const Nonlinearity& nl,
                                   const OperatorParams& params);

/// -H_p u: flux H(grad u)^{p-1} grad_xi H(grad u) at nodes (zero flux where
/// grad u = 0), then minus its central-difference divergence. Boundary
/// layer set to 0.
GridFunction apply_anisotropic_p_laplacian(const GridFunction& u,
                                           const FinslerNorm& norm,
                                           const OperatorParams& params);

/// Fractional p-Laplacian: nodewise singular quadrature with the diagonal
/// excluded (the symmetric node layout realizes the principal value) plus
/// the zero-extension tail J_p(u(x)) T(x).
GridFunction apply_fractional_p_laplacian(const GridFunction& u,
                                          const OperatorParams& params);

/// integral of H(grad u)^{p-1} grad_xi H(grad u) . grad phi.
double local_form(const GridFunction& u, const FinslerNorm& norm,
                  const OperatorParams& params, const GridFunction& phi);

/// double integral of J_p(u(x)-u(y)) (phi(x)-phi(y)) dmu_{s,p}, including
/// the zero-extension tail. phi must vanish on the boundary layer.
double nonlocal_form(const GridFunction& u, const OperatorParams& params,
                     const GridFunction& phi);

/// Max over test functions phi of
///   |alpha local_form + beta nonlocal_form - integral f(u) phi|
/// normalized by the X_{alpha,beta} norm of phi,
/// (alpha ||H(grad phi)||_p^p + beta [phi]_{s,p}^p + ||phi||_p^p)^{1/p}.
/// Test functions must share u's grid and vanish on the boundary layer.
double weak_residual(const GridFunction& u, const FinslerNorm& norm,
                     const OperatorParams& params, const Nonlinearity& nl,
                     std::span<const GridFunction> test_functions);

/// |r|^p with fast paths for integer p.
double pow_abs(double r, double p);
/// J_p(r) = |r|^{p-2} r, with J_p(0) = 0. Exactly odd: j_p(-r) == -j_p(r).
double j_p(double r, double p);

}  // namespace poho
