#include "poho/energy.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "poho/reduce.hpp"

namespace poho {

namespace {

double parse_number(std::string_view s, const char* what) {
  char* end = nullptr;
  const std::string tmp(s);
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || tmp.empty())
    throw std::invalid_argument(std::string(what) + ": bad number '" + tmp + "'");
  return v;
}

std::vector<double> split_numbers(std::string_view s, int count, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string_view piece =
        s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_number(piece, what));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(out.size()) != count)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(count) +
                                " comma-separated numbers");
  return out;
}

// Kernel |x_i - x_j|^{expo} from integer index offsets, so that it is
// exactly symmetric and mirror symmetric. In dimension 1 the distance only
// depends on |i - j| and a lookup table removes N^2 pow calls.
class PairKernel {
 public:
  PairKernel(const GridSpec& spec, double expo) : dim_(spec.dim), expo_(expo) {
    const double h = spec.spacing();
    if (dim_ == 1) {
      table_.resize(spec.points_per_axis);
      table_[0] = 0.0;
      for (int d = 1; d < spec.points_per_axis; ++d)
        table_[d] = std::pow(h * static_cast<double>(d), expo_);
    } else {
      h_ = h;
      const std::size_t total = spec.node_count();
      idx_.resize(total * static_cast<std::size_t>(dim_));
      for (std::size_t k = 0; k < total; ++k)
        for (int a = 0; a < dim_; ++a)
          idx_[k * dim_ + a] = spec.axis_index(k, a);
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (dim_ == 1) {
      const std::size_t d = (i > j) ? i - j : j - i;
      return table_[d];
    }
    std::int64_t d2 = 0;
    for (int a = 0; a < dim_; ++a) {
      const std::int64_t d = idx_[i * dim_ + a] - idx_[j * dim_ + a];
      d2 += d * d;
    }
    return std::pow(h_ * std::sqrt(static_cast<double>(d2)), expo_);
  }

 private:
  int dim_;
  double expo_;
  double h_ = 0.0;
  std::vector<double> table_;
  std::vector<int> idx_;
};

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
  if (!(a.spec() == b.spec()))
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

void require_dims(const GridFunction& u, const OperatorParams& params, const char* what) {
  if (u.spec().dim != params.dim)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void require_boundary_zero(const GridFunction& phi, const char* what) {
  if (phi.decay_margin() != 0.0)
    throw std::invalid_argument(std::string(what) +
                                ": test function must vanish on the boundary layer");
}

// Flux H(g)^{p-1} grad_xi H(g) at one node; zero where g = 0. H is C^1 only
// off the origin, but the flux tends to 0 there since p > 1, so the zero
// extension is the continuous choice.
void flux_at(const FinslerNorm& norm, double p, std::span<const double> g,
             std::span<double> out) {
  bool zero = true;
  for (double gi : g)
    if (gi != 0.0) zero = false;
  if (zero) {
    for (double& o : out) o = 0.0;
    return;
  }
  const double H = norm.eval(g);
  if (H == 0.0) {
    for (double& o : out) o = 0.0;
    return;
  }
  norm.grad(g, out);
  const double scale = std::pow(H, p - 1.0);
  for (double& o : out) o *= scale;
}

}  // namespace

double pow_abs(double r, double p) {
  if (p == 2.0) return r * r;
  if (p == 3.0) {
    const double a = std::fabs(r);
    return a * a * a;
  }
  if (p == 4.0) {
    const double rr = r * r;
    return rr * rr;
  }
  return std::pow(std::fabs(r), p);
}

double j_p(double r, double p) {
  if (r == 0.0) return 0.0;
  if (p == 2.0) return r;
  return pow_abs(r, p - 2.0) * r;
}

OperatorParams::OperatorParams(int dim_, double p_, double s_, double alpha_, double beta_)
    : dim(dim_), p(p_), s(s_), alpha(alpha_), beta(beta_) {
  if (dim < 1 || dim > 8)
    throw std::invalid_argument("OperatorParams: dim must be in [1, 8]");
  if (!(p > 1.0)) throw std::invalid_argument("OperatorParams: p must be > 1");
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("OperatorParams: s must lie in (0, 1)");
  const bool admissible = (alpha == 1.0 && beta == 0.0) ||
                          (alpha == 1.0 && beta > 0.0) ||
                          (alpha == 0.0 && beta == 1.0);
  if (!admissible)
    throw std::invalid_argument(
        "OperatorParams: (alpha, beta) must be (1,0), (1,gamma>0) or (0,1)");
}

Nonlinearity Nonlinearity::signed_power(double q, double lambda, double mu) {
  if (!(q > 1.0)) throw std::invalid_argument("signed_power: q must be > 1");
  Nonlinearity nl;
  nl.kind_ = Kind::SignedPower;
  nl.q_ = q;
  nl.lambda_ = lambda;
  nl.mu_ = mu;
  return nl;
}

Nonlinearity Nonlinearity::power_minus_mass(double q, double m) {
  if (!(q > 1.0)) throw std::invalid_argument("power_minus_mass: q must be > 1");
  if (!(m > 0.0)) throw std::invalid_argument("power_minus_mass: m must be positive");
  Nonlinearity nl;
  nl.kind_ = Kind::PowerMinusMass;
  nl.q_ = q;
  nl.mass_ = m;
  return nl;
}

Nonlinearity Nonlinearity::parse(std::string_view text) {
  if (text.rfind("sp:", 0) == 0) {
    const auto v = split_numbers(text.substr(3), 3, "sp nonlinearity");
    return signed_power(v[0], v[1], v[2]);
  }
  if (text.rfind("pmm:", 0) == 0) {
    const auto v = split_numbers(text.substr(4), 2, "pmm nonlinearity");
    return power_minus_mass(v[0], v[1]);
  }
  throw std::invalid_argument("nonlinearity grammar: expected sp:<q>,<lambda>,<mu> | pmm:<q>,<m>");
}

std::string Nonlinearity::grammar_string() const {
  char buf[96];
  if (kind_ == Kind::SignedPower)
    std::snprintf(buf, sizeof buf, "sp:%g,%g,%g", q_, lambda_, mu_);
  else
    std::snprintf(buf, sizeof buf, "pmm:%g,%g", q_, mass_);
  return buf;
}

double Nonlinearity::f(double t, double p) const {
  switch (kind_) {
    case Kind::SignedPower:
      if (t > 0.0) return lambda_ * std::pow(t, q_ - 1.0);
      if (t < 0.0) return -mu_ * std::pow(-t, q_ - 1.0);
      return 0.0;
    case Kind::PowerMinusMass:
      return j_p(t, q_) - mass_ * j_p(t, p);
  }
  return 0.0;
}

double Nonlinearity::F(double t, double p) const {
  switch (kind_) {
    case Kind::SignedPower:
      if (t > 0.0) return lambda_ * std::pow(t, q_) / q_;
      if (t < 0.0) return mu_ * std::pow(-t, q_) / q_;
      return 0.0;
    case Kind::PowerMinusMass:
      return pow_abs(t, q_) / q_ - mass_ * pow_abs(t, p) / p;
  }
  return 0.0;
}

Nonlinearity::Growth Nonlinearity::growth_class(double p) const {
  return (q_ == p) ? Growth::f1 : Growth::f2;
}

SystemNonlinearity::SystemNonlinearity(double q, double lambda, double mu)
    : q_(q), lambda_(lambda), mu_(mu) {
  if (!(q > 1.0)) throw std::invalid_argument("decoupled_powers: q must be > 1");
}

SystemNonlinearity SystemNonlinearity::decoupled_powers(double q, double lambda, double mu) {
  return SystemNonlinearity(q, lambda, mu);
}

SystemNonlinearity SystemNonlinearity::parse(std::string_view text) {
  if (text.rfind("dp:", 0) == 0) {
    const auto v = split_numbers(text.substr(3), 3, "dp nonlinearity");
    return decoupled_powers(v[0], v[1], v[2]);
  }
  throw std::invalid_argument("system nonlinearity grammar: expected dp:<q>,<lambda>,<mu>");
}

std::string SystemNonlinearity::grammar_string() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "dp:%g,%g,%g", q_, lambda_, mu_);
  return buf;
}

double SystemNonlinearity::g(double t, double s) const {
  return (lambda_ * pow_abs(t, q_) + mu_ * pow_abs(s, q_)) / q_;
}

double SystemNonlinearity::gu(double t, double /*s*/) const { return lambda_ * j_p(t, q_); }

double SystemNonlinearity::gv(double /*t*/, double s) const { return mu_ * j_p(s, q_); }

Nonlinearity::Growth SystemNonlinearity::growth_class(double p) const {
  return (q_ == p) ? Nonlinearity::Growth::f1 : Nonlinearity::Growth::f2;
}

double local_energy(const GridFunction& u, const FinslerNorm& norm,
                    const OperatorParams& params) {
  require_dims(u, params, "local_energy");
  if (norm.dim() != params.dim)
    throw std::invalid_argument("local_energy: norm dimension mismatch");

  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const int n = spec.dim;
  const double p = params.p;
  const VectorGridFunction g = gradient(u);

  std::vector<double> terms(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    double gv[8];
    for (int a = 0; a < n; ++a) gv[a] = g.components[a][kk];
    const double H = norm.eval(std::span<const double>(gv, n));
    terms[kk] = spec.quad_weight(kk) * pow_abs(H, p);
  }
  return std::pow(spec.spacing(), n) * pairwise_sum(terms);
}

std::vector<double> tail_integrals(const GridSpec& spec, const OperatorParams& params) {
  const double sp = params.s * params.p;
  const double h = spec.spacing();
  const double L = spec.half_width;
  const std::size_t total = spec.node_count();
  std::vector<double> out(total);

  if (spec.dim == 1) {
    for (std::size_t k = 0; k < total; ++k) {
      const double x = spec.node(static_cast<int>(k));
      // Edge nodes would see a divergent pointwise integral; clamp the
      // distance to the half cell.
      const double dr = std::max(L - x, 0.5 * h);
      const double dl = std::max(L + x, 0.5 * h);
      out[k] = (std::pow(dr, -sp) + std::pow(dl, -sp)) / sp;
    }
    return out;
  }

  // dim >= 2: the box complement lies outside the ball of radius
  // d(x) = L - |x|_inf around x, so the radial integral is an upper bound.
  constexpr double pi = 3.14159265358979323846;
  const double omega =
      2.0 * std::pow(pi, 0.5 * spec.dim) / std::tgamma(0.5 * spec.dim);
  std::vector<double> x(spec.dim);
  for (std::size_t k = 0; k < total; ++k) {
    spec.coords(k, x);
    double linf = 0.0;
    for (double xa : x) linf = std::max(linf, std::fabs(xa));
    const double d = std::max(L - linf, 0.5 * h);
    out[k] = omega * std::pow(d, -sp) / sp;
  }
  return out;
}

namespace {

// Coefficient of the near-diagonal strip |x-y| <= h/2 that the excluded
// diagonal leaves out. To first order u(x)-u(y) ~ grad u . (x-y), so the
// strip integrates to |u'(x)|^p * 2 (h/2)^{p-sp} / (p-sp) per point in
// dimension 1, where the strip and the diagonal node cell coincide. Without
// it the sum converges only like h^{p-sp}, too slowly for large sp.
double diagonal_strip_coefficient(const GridSpec& spec, const OperatorParams& params) {
  const double psp = params.p - params.s * params.p;
  return 2.0 * std::pow(0.5 * spec.spacing(), psp) / psp;
}

}  // namespace

GagliardoResult gagliardo_seminorm(const GridFunction& u, const OperatorParams& params,
                                   TailPolicy policy) {
  require_dims(u, params, "gagliardo_seminorm");
  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const int n = spec.dim;
  const double p = params.p;
  const std::span<const double> v = u.values();

  const PairKernel kernel(spec, -(n + params.s * p));

  std::vector<double> rows(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    const double ui = v[ii];
    rows[ii] = spec.quad_weight(ii) *
               pairwise_map_sum(0, total, [&](std::size_t j) {
                 if (j == ii) return 0.0;
                 return spec.quad_weight(j) * pow_abs(ui - v[j], p) * kernel(ii, j);
               });
  }
  const double cell = std::pow(spec.spacing(), n);
  double pairs = cell * cell * pairwise_sum(rows);

  if (n == 1) {
    const VectorGridFunction g = gradient(u);
    const double coeff = diagonal_strip_coefficient(spec, params);
    std::vector<double> diag_terms(total);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
      const std::size_t kk = static_cast<std::size_t>(k);
      diag_terms[kk] = spec.quad_weight(kk) * pow_abs(g.components[0][kk], p);
    }
    pairs += cell * coeff * pairwise_sum(diag_terms);
  }

  const std::vector<double> T = tail_integrals(spec, params);
  std::vector<double> tail_terms(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    tail_terms[kk] = spec.quad_weight(kk) * pow_abs(v[kk], p) * T[kk];
  }
  const double tail = 2.0 * cell * pairwise_sum(tail_terms);

  GagliardoResult result;
  result.tail_bound = tail;
  result.value = (policy == TailPolicy::zero_extension) ? pairs + tail : pairs;
  return result;
}

PotentialResult potential_integral(const GridFunction& u, const Nonlinearity& nl,
                                   const OperatorParams& params) {
  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const double p = params.p;
  std::vector<double> f_terms(total), uf_terms(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    const double w = spec.quad_weight(kk);
    const double uk = u.value(kk);
    f_terms[kk] = w * nl.F(uk, p);
    uf_terms[kk] = w * uk * nl.f(uk, p);
  }
  const double cell = std::pow(spec.spacing(), spec.dim);
  return PotentialResult{cell * pairwise_sum(f_terms), cell * pairwise_sum(uf_terms)};
}

GridFunction apply_anisotropic_p_laplacian(const GridFunction& u, const FinslerNorm& norm,
                                           const OperatorParams& params) {
  require_dims(u, params, "apply_anisotropic_p_laplacian");
  if (norm.dim() != params.dim)
    throw std::invalid_argument("apply_anisotropic_p_laplacian: norm dimension mismatch");

  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const int n = spec.dim;
  const double p = params.p;
  const VectorGridFunction g = gradient(u);

  std::vector<std::vector<double>> flux(n, std::vector<double>(total));
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    double gv[8], fv[8];
    for (int a = 0; a < n; ++a) gv[a] = g.components[a][kk];
    flux_at(norm, p, std::span<const double>(gv, n), std::span<double>(fv, n));
    for (int a = 0; a < n; ++a) flux[a][kk] = fv[a];
  }

  const double inv2h = 1.0 / (2.0 * spec.spacing());
  std::vector<double> out(total, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    if (spec.on_boundary_layer(kk)) continue;
    double div = 0.0;
    for (int a = 0; a < n; ++a) {
      const std::size_t str = spec.stride(a);
      div += (flux[a][kk + str] - flux[a][kk - str]) * inv2h;
    }
    out[kk] = -div;
  }
  return GridFunction(spec, std::move(out));
}

GridFunction apply_fractional_p_laplacian(const GridFunction& u,
                                          const OperatorParams& params) {
  require_dims(u, params, "apply_fractional_p_laplacian");
  if (!params.has_nonlocal())
    throw std::invalid_argument("apply_fractional_p_laplacian: requires beta > 0");

  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const double p = params.p;
  const std::span<const double> v = u.values();
  const PairKernel kernel(spec, -(spec.dim + params.s * p));
  const std::vector<double> T = tail_integrals(spec, params);
  const double cell = std::pow(spec.spacing(), spec.dim);

  std::vector<double> out(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    const double ui = v[ii];
    const double row = pairwise_map_sum(0, total, [&](std::size_t j) {
      if (j == ii) return 0.0;
      return spec.quad_weight(j) * j_p(ui - v[j], p) * kernel(ii, j);
    });
    out[ii] = cell * row + j_p(ui, p) * T[ii];
  }
  return GridFunction(spec, std::move(out));
}

double local_form(const GridFunction& u, const FinslerNorm& norm,
                  const OperatorParams& params, const GridFunction& phi) {
  require_dims(u, params, "local_form");
  require_same_grid(u, phi, "local_form");

  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const int n = spec.dim;
  const double p = params.p;
  const VectorGridFunction gu = gradient(u);
  const VectorGridFunction gphi = gradient(phi);

  std::vector<double> terms(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    double gv[8], fv[8];
    for (int a = 0; a < n; ++a) gv[a] = gu.components[a][kk];
    flux_at(norm, p, std::span<const double>(gv, n), std::span<double>(fv, n));
    double dot = 0.0;
    for (int a = 0; a < n; ++a) dot += fv[a] * gphi.components[a][kk];
    terms[kk] = spec.quad_weight(kk) * dot;
  }
  return std::pow(spec.spacing(), n) * pairwise_sum(terms);
}

double nonlocal_form(const GridFunction& u, const OperatorParams& params,
                     const GridFunction& phi) {
  require_dims(u, params, "nonlocal_form");
  require_same_grid(u, phi, "nonlocal_form");
  require_boundary_zero(phi, "nonlocal_form");

  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const double p = params.p;
  const std::span<const double> uv = u.values();
  const std::span<const double> pv = phi.values();
  const PairKernel kernel(spec, -(spec.dim + params.s * p));
  const std::vector<double> T = tail_integrals(spec, params);
  const double cell = std::pow(spec.spacing(), spec.dim);

  std::vector<double> rows(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    const double ui = uv[ii];
    const double pi = pv[ii];
    rows[ii] = spec.quad_weight(ii) *
               pairwise_map_sum(0, total, [&](std::size_t j) {
                 if (j == ii) return 0.0;
                 return spec.quad_weight(j) * j_p(ui - uv[j], p) * (pi - pv[j]) *
                        kernel(ii, j);
               });
  }
  double pairs = cell * cell * pairwise_sum(rows);

  if (spec.dim == 1) {
    // Derivative of the diagonal-strip compensation in gagliardo_seminorm,
    // so the form stays the exact directional derivative of E_nl / p.
    const VectorGridFunction gu = gradient(u);
    const VectorGridFunction gphi = gradient(phi);
    const double coeff = diagonal_strip_coefficient(spec, params);
    std::vector<double> diag_terms(total);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
      const std::size_t kk = static_cast<std::size_t>(k);
      diag_terms[kk] = spec.quad_weight(kk) * j_p(gu.components[0][kk], p) *
                       gphi.components[0][kk];
    }
    pairs += cell * coeff * pairwise_sum(diag_terms);
  }

  std::vector<double> tail_terms(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    tail_terms[kk] = spec.quad_weight(kk) * j_p(uv[kk], p) * pv[kk] * T[kk];
  }
  const double tail = 2.0 * cell * pairwise_sum(tail_terms);
  return pairs + tail;
}

double weak_residual(const GridFunction& u, const FinslerNorm& norm,
                     const OperatorParams& params, const Nonlinearity& nl,
                     std::span<const GridFunction> test_functions) {
  if (test_functions.empty())
    throw std::invalid_argument("weak_residual: need at least one test function");
  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const double cell = std::pow(spec.spacing(), spec.dim);

  std::vector<double> fu(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    fu[kk] = spec.quad_weight(kk) * nl.f(u.value(kk), params.p);
  }

  double worst = 0.0;
  for (const GridFunction& phi : test_functions) {
    require_same_grid(u, phi, "weak_residual");
    require_boundary_zero(phi, "weak_residual");

    double num = 0.0;
    if (params.has_local()) num += params.alpha * local_form(u, norm, params, phi);
    if (params.has_nonlocal()) num += params.beta * nonlocal_form(u, params, phi);
    num -= cell * pairwise_map_sum(0, total, [&](std::size_t k) {
             return fu[k] * phi.value(k);
           });

    double energy = cell * pairwise_map_sum(0, total, [&](std::size_t k) {
                      return spec.quad_weight(k) * pow_abs(phi.value(k), params.p);
                    });
    if (params.has_local()) energy += params.alpha * local_energy(phi, norm, params);
    if (params.has_nonlocal())
      energy += params.beta *
                gagliardo_seminorm(phi, params, TailPolicy::zero_extension).value;
    const double denom = std::pow(energy, 1.0 / params.p);
    worst = std::max(worst, std::fabs(num) / denom);
  }
  return worst;
}

}  // namespace poho
