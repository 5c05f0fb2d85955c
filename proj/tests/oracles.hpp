// Test-only oracles, independent of the library's quadrature path: an
// adaptive Simpson integrator and brute-force evaluations of the nonlocal
// double integral and the fractional operator built on top of it.
#pragma once

#include <cmath>
#include <functional>

namespace oracle {

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Composite adaptive Simpson: the interval is split into fixed panels
/// before adapting, so localized structure cannot hide between the first
/// probe points of a single adaptive pass.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 42,
                        int panels = 64) {
  double total = 0.0;
  const double width = (b - a) / panels;
  const double panel_tol = tol / panels;
  for (int i = 0; i < panels; ++i) {
    const double pa = a + i * width;
    const double pb = (i + 1 == panels) ? b : a + (i + 1) * width;
    const double fa = f(pa);
    const double fb = f(pb);
    const double m = 0.5 * (pa + pb);
    const double fm = f(m);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_rec(f, pa, pb, fa, fm, fb, whole, panel_tol, depth);
  }
  return total;
}

/// Box-box part of the Gagliardo double integral of a smooth function g on
/// [-L, L], with the diagonal substitution w = x - y and the regularizing
/// change of variable w = v^4:
///
///   2 * int_0^{2L} w^{-1-sp} int |g(x) - g(x-w)|^p dx dw.
inline double gagliardo_box(const std::function<double(double)>& g, double L, double p,
                            double s) {
  const double sp = s * p;
  const auto inner = [&](double w) {
    const auto h = [&](double x) { return std::pow(std::fabs(g(x) - g(x - w)), p); };
    return adaptive_simpson(h, -L + w, L, 1e-10);
  };
  const auto outer = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double w = v * v * v * v;
    return 2.0 * inner(w) * std::pow(w, -1.0 - sp) * 4.0 * v * v * v;
  };
  return adaptive_simpson(outer, 0.0, std::pow(2.0 * L, 0.25), 1e-8);
}

/// Zero-extension tail of the double integral: 2 int |g(x)|^p T(x) dx with
/// the exact one-point tail T(x) = ((L-x)^{-sp} + (L+x)^{-sp}) / sp.
inline double gagliardo_tail(const std::function<double(double)>& g, double L, double p,
                             double s) {
  const double sp = s * p;
  const auto h = [&](double x) {
    const double T = (std::pow(L - x, -sp) + std::pow(L + x, -sp)) / sp;
    return 2.0 * std::pow(std::fabs(g(x)), p) * T;
  };
  // The endpoint singularity is integrable and the presets decay so fast
  // that the clipped sliver is far below the comparison tolerance.
  return adaptive_simpson(h, -L + 1e-6, L - 1e-6, 1e-10);
}

/// Fractional Laplacian (p = 2) of a smooth decaying function at a point,
/// via the symmetrized principal-value form
///   int_0^inf (2g(x) - g(x+r) - g(x-r)) r^{-1-2s} dr
/// with r = v^2. Below r0 the second difference cancels to rounding noise
/// under the singular kernel, so that core is added through its Taylor
/// value -g''(x) r0^{2-2s}/(2-2s); beyond R the remainder is analytic.
inline double fractional_p2(const std::function<double(double)>& g, double x, double s,
                            double R = 60.0) {
  const double r0 = 1e-6;
  const double fd = 1e-4;
  const double d2 = (g(x + fd) - 2.0 * g(x) + g(x - fd)) / (fd * fd);
  const double core = -d2 * std::pow(r0, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);

  const auto integrand = [&](double v) {
    const double r = v * v;
    return 2.0 * (2.0 * g(x) - g(x + r) - g(x - r)) * std::pow(v, -1.0 - 4.0 * s);
  };
  const double main = adaptive_simpson(integrand, std::sqrt(r0), std::sqrt(R), 1e-9);
  const double far = g(x) * std::pow(R, -2.0 * s) / s;
  return core + main + far;
}

}  // namespace oracle
