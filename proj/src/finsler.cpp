#include "poho/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "poho/rng.hpp"

namespace poho {

namespace {

constexpr int kConstantSamples = 100000;

double euclidean_eval(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

// Kronecker sequence mapped to the sphere through Box-Muller pairs.
// Deterministic and reasonably well spread for the small dimensions used
// here.
void low_discrepancy_direction(int k, int dim, std::span<double> out) {
  static constexpr double kAlphas[] = {
      0.41421356237309515,  // frac(sqrt(2))
      0.7320508075688772,   // frac(sqrt(3))
      0.23606797749978969,  // frac(sqrt(5))
      0.6457513110645907,   // frac(sqrt(7))
      0.3166247903553998,   // frac(sqrt(11))
      0.60555127546398912,  // frac(sqrt(13))
      0.1231056256176605,   // frac(sqrt(17))
      0.35889894354067355,  // frac(sqrt(19))
  };
  constexpr double two_pi = 6.283185307179586476925286766559;
  double u[10];
  const int m = (dim % 2 == 0) ? dim : dim + 1;
  for (int j = 0; j < m; ++j) {
    double v = 0.5 + (k + 1) * kAlphas[j % 8];
    u[j] = v - std::floor(v);
  }
  for (int j = 0; j + 1 < m + 1; j += 2) {
    const double a = std::max(u[j], 1e-15);
    const double r = std::sqrt(-2.0 * std::log(a));
    const double z0 = r * std::cos(two_pi * u[j + 1]);
    const double z1 = r * std::sin(two_pi * u[j + 1]);
    if (j < dim) out[j] = z0;
    if (j + 1 < dim) out[j + 1] = z1;
  }
  double nrm = euclidean_eval(out.first(dim));
  if (nrm == 0.0) {
    out[0] = 1.0;
    for (int j = 1; j < dim; ++j) out[j] = 0.0;
    return;
  }
  for (int j = 0; j < dim; ++j) out[j] /= nrm;
}

void random_direction(SplitMix64& rng, std::span<double> out) {
  double nrm = 0.0;
  do {
    for (double& v : out) v = rng.normal();
    nrm = euclidean_eval(out);
  } while (nrm == 0.0);
  for (double& v : out) v /= nrm;
}

}  // namespace

FinslerNorm::FinslerNorm(Kind kind, int dim, double q, double lambda, double mu)
    : kind_(kind), dim_(dim), q_(q), lambda_(lambda), mu_(mu) {
  if (dim < 1 || dim > 8)
    throw std::invalid_argument("FinslerNorm: dimension must be in [1, 8]");
  estimate_constants();
}

FinslerNorm FinslerNorm::euclidean(int dim) {
  return FinslerNorm(Kind::Euclidean, dim, 2.0, 0.0, 0.0);
}

FinslerNorm FinslerNorm::lq(double q, int dim) {
  if (q < 1.0)
    throw std::invalid_argument("FinslerNorm::lq: exponent must be >= 1");
  return FinslerNorm(Kind::Lq, dim, q, 0.0, 0.0);
}

FinslerNorm FinslerNorm::quartic_mix(double lambda, double mu, int dim) {
  if (lambda <= 0.0 || mu <= 0.0)
    throw std::invalid_argument("FinslerNorm::quartic_mix: lambda, mu must be positive");
  return FinslerNorm(Kind::QuarticMix, dim, 0.0, lambda, mu);
}

FinslerNorm FinslerNorm::parse(std::string_view text, int dim) {
  if (text == "euclidean") return euclidean(dim);
  auto num = [](std::string_view s) {
    char* end = nullptr;
    const std::string tmp(s);
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
      throw std::invalid_argument("norm grammar: bad number '" + tmp + "'");
    return v;
  };
  if (text.rfind("hq:", 0) == 0) return lq(num(text.substr(3)), dim);
  if (text.rfind("hlm:", 0) == 0) {
    const std::string_view rest = text.substr(4);
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw std::invalid_argument("norm grammar: hlm:<lambda>,<mu>");
    return quartic_mix(num(rest.substr(0, comma)), num(rest.substr(comma + 1)), dim);
  }
  throw std::invalid_argument("norm grammar: expected euclidean | hq:<q> | hlm:<lambda>,<mu>");
}

std::string FinslerNorm::grammar_string() const {
  char buf[64];
  switch (kind_) {
    case Kind::Euclidean:
      return "euclidean";
    case Kind::Lq:
      std::snprintf(buf, sizeof buf, "hq:%g", q_);
      return buf;
    case Kind::QuarticMix:
      std::snprintf(buf, sizeof buf, "hlm:%g,%g", lambda_, mu_);
      return buf;
  }
  return "";
}

double FinslerNorm::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("FinslerNorm::eval: dimension mismatch");
  switch (kind_) {
    case Kind::Euclidean:
      return euclidean_eval(x);
    case Kind::Lq: {
      if (q_ == 2.0) return euclidean_eval(x);
      double s = 0.0;
      for (double xi : x) s += std::pow(std::fabs(xi), q_);
      if (s == 0.0) return 0.0;
      return std::pow(s, 1.0 / q_);
    }
    case Kind::QuarticMix: {
      double s4 = 0.0, s2 = 0.0;
      for (double xi : x) {
        const double xi2 = xi * xi;
        s4 += xi2 * xi2;
        s2 += xi2;
      }
      return std::sqrt(lambda_ * std::sqrt(s4) + mu_ * s2);
    }
  }
  return 0.0;
}

void FinslerNorm::grad(std::span<const double> x, std::span<double> out) const {
  if (static_cast<int>(x.size()) != dim_ || out.size() != x.size())
    throw std::invalid_argument("FinslerNorm::grad: dimension mismatch");
  bool zero = true;
  for (double xi : x)
    if (xi != 0.0) zero = false;
  if (zero) throw std::domain_error("FinslerNorm::grad: undefined at the origin");

  switch (kind_) {
    case Kind::Euclidean: {
      const double r = euclidean_eval(x);
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / r;
      return;
    }
    case Kind::Lq: {
      if (q_ == 2.0) {
        const double r = euclidean_eval(x);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / r;
        return;
      }
      // dH/dx_i = H^{1-q} |x_i|^{q-1} sign(x_i); for q = 1 this degenerates
      // to sign(x_i), a subgradient selection on the facets.
      const double H = eval(x);
      const double scale = std::pow(H, 1.0 - q_);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::fabs(x[i]);
        out[i] = (a == 0.0) ? 0.0
                            : std::copysign(std::pow(a, q_ - 1.0) * scale, x[i]);
      }
      return;
    }
    case Kind::QuarticMix: {
      // dH/dx_i = (lambda x_i^3 / Q + mu x_i) / H, Q = sqrt(sum x^4)
      double s4 = 0.0, s2 = 0.0;
      for (double xi : x) {
        const double xi2 = xi * xi;
        s4 += xi2 * xi2;
        s2 += xi2;
      }
      const double Q = std::sqrt(s4);
      const double H = std::sqrt(lambda_ * Q + mu_ * s2);
      for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = (lambda_ * x[i] * x[i] * x[i] / Q + mu_ * x[i]) / H;
      return;
    }
  }
}

std::vector<double> FinslerNorm::grad(std::span<const double> x) const {
  std::vector<double> out(x.size());
  grad(x, out);
  return out;
}

void FinslerNorm::estimate_constants() {
  if (kind_ == Kind::Euclidean) {
    c_lower_ = c_upper_ = 1.0;
    return;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::vector<double> dir(dim_);
  auto visit = [&](std::span<const double> d) {
    const double v = eval(d);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };

  // Structured battery: axes and all sign diagonals. For the built-in
  // families the ratio H(x)/|x| is extremal at one of these.
  for (int a = 0; a < dim_; ++a) {
    std::fill(dir.begin(), dir.end(), 0.0);
    dir[a] = 1.0;
    visit(dir);
    dir[a] = -1.0;
    visit(dir);
  }
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(dim_));
  for (int mask = 0; mask < (1 << dim_); ++mask) {
    for (int a = 0; a < dim_; ++a)
      dir[a] = ((mask >> a) & 1) ? -inv_sqrt_n : inv_sqrt_n;
    visit(dir);
  }

  for (int k = 0; k < kConstantSamples; ++k) {
    low_discrepancy_direction(k, dim_, dir);
    visit(dir);
  }
  c_lower_ = lo;
  c_upper_ = hi;
}

PropertyReport check_minkowski_properties(const FinslerNorm& norm,
                                          int sample_count,
                                          std::uint64_t seed) {
  if (sample_count < 1)
    throw std::invalid_argument("check_minkowski_properties: sample_count must be >= 1");

  const int n = norm.dim();
  PropertyReport rep;
  rep.sample_count = sample_count;
  rep.seed = seed;

  SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ull);

  std::vector<double> x(n), tx(n), g(n), gt(n), xhat(n), yhat(n), mid(n), fd(n);

  // H(0) = 0 exactly.
  std::fill(x.begin(), x.end(), 0.0);
  rep.positivity_pass = (norm.eval(x) == 0.0);

  double worst_pos = 0.0, worst_hom = 0.0, worst_euler = 0.0;
  double worst_sign = 0.0, worst_fd = 0.0, grad_sup = 0.0;
  double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0.0;
  double conv_gap = std::numeric_limits<double>::infinity();

  const int fd_samples = std::min(sample_count, 2000);
  const double fd_step = 1e-6;

  for (int k = 0; k < sample_count; ++k) {
    random_direction(rng, x);
    const double scale = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    for (double& v : x) v *= scale;

    double t = rng.uniform(-10.0, 10.0);
    if (std::fabs(t) < 1e-2) t = std::copysign(1e-2, t == 0.0 ? 1.0 : t);

    const double H = norm.eval(x);
    if (H <= 0.0) worst_pos = std::max(worst_pos, -H + (H == 0.0 ? 1.0 : 0.0));
    ratio_lo = std::min(ratio_lo, H / euclidean_eval(x));
    ratio_hi = std::max(ratio_hi, H / euclidean_eval(x));

    for (int i = 0; i < n; ++i) tx[i] = t * x[i];
    const double Ht = norm.eval(tx);
    worst_hom = std::max(worst_hom, std::fabs(Ht - std::fabs(t) * H) / Ht);

    norm.grad(x, g);
    double xg = 0.0, gnrm2 = 0.0, ginf = 0.0;
    for (int i = 0; i < n; ++i) {
      xg += x[i] * g[i];
      gnrm2 += g[i] * g[i];
      ginf = std::max(ginf, std::fabs(g[i]));
    }
    worst_euler = std::max(worst_euler, std::fabs(xg - H) / H);
    grad_sup = std::max(grad_sup, std::sqrt(gnrm2));

    norm.grad(tx, gt);
    const double sgn = (t > 0.0) ? 1.0 : -1.0;
    double sdiff = 0.0;
    for (int i = 0; i < n; ++i)
      sdiff = std::max(sdiff, std::fabs(gt[i] - sgn * g[i]));
    worst_sign = std::max(worst_sign, sdiff / std::max(ginf, 1e-300));

    if (k < fd_samples) {
      const double nrm = euclidean_eval(x);
      for (int i = 0; i < n; ++i) xhat[i] = x[i] / nrm;
      norm.grad(xhat, g);
      double fdiff = 0.0, gref = 0.0;
      for (int i = 0; i < n; ++i) {
        double save = xhat[i];
        xhat[i] = save + fd_step;
        const double hp = norm.eval(xhat);
        xhat[i] = save - fd_step;
        const double hm = norm.eval(xhat);
        xhat[i] = save;
        fd[i] = (hp - hm) / (2.0 * fd_step);
        fdiff = std::max(fdiff, std::fabs(fd[i] - g[i]));
        gref = std::max(gref, std::fabs(g[i]));
      }
      worst_fd = std::max(worst_fd, fdiff / std::max(gref, 1e-12));
    }

    // Strict-convexity probe: H-normalized pair, midpoint gap
    // 1 - H((a+b)/2) with H(a) = H(b) = 1. Zero gap means a flat segment.
    random_direction(rng, yhat);
    double cosang = 0.0;
    for (int i = 0; i < n; ++i) cosang += (x[i] / euclidean_eval(x)) * yhat[i];
    if (std::fabs(cosang) < 0.995) {
      const double Hy = norm.eval(yhat);
      for (int i = 0; i < n; ++i)
        mid[i] = 0.5 * (x[i] / H + yhat[i] / Hy);
      conv_gap = std::min(conv_gap, 1.0 - norm.eval(mid));
    }
  }

  rep.positivity_pass = rep.positivity_pass && (worst_pos == 0.0);
  rep.positivity_violation = worst_pos;
  rep.homogeneity_violation = worst_hom;
  rep.homogeneity_pass = worst_hom <= 1e-10;
  rep.euler_violation = worst_euler;
  rep.euler_pass = worst_euler <= 1e-10;
  rep.gradient_sign_violation = worst_sign;
  rep.gradient_sign_pass = worst_sign <= 1e-10;
  rep.gradient_fd_violation = worst_fd;
  rep.gradient_fd_pass = worst_fd <= 1e-5;
  rep.gradient_sup = grad_sup;

  rep.c1_estimate = std::min(norm.c_lower(), ratio_lo);
  rep.c2_estimate = std::max(norm.c_upper(), ratio_hi);
  rep.comparability_pass =
      rep.c1_estimate > 0.0 && std::isfinite(rep.c2_estimate);

  rep.convexity_min_gap = conv_gap;
  rep.strictly_convex = conv_gap > 1e-9;
  return rep;
}

}  // namespace poho
