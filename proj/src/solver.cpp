#include "poho/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "poho/reduce.hpp"

namespace poho {

namespace {

struct EnergyTerms {
  double local = 0.0;      // ||H(grad u)||_p^p
  double nonlocal = 0.0;   // [u]_{s,p}^p with zero-extension tail
  double mass_p = 0.0;     // integral of |u|^p
  double mass_q = 0.0;     // integral of |u|^q
  double penalty = 0.0;    // stabilization term, quadratic in u
};

// Fibering map along the ray t -> t*u for f(t) = |t|^{q-2}t - m|t|^{p-2}t:
//   J(t u) = A t^p + P t^2 - B t^q,
//   A = (alpha E_loc + beta E_nl + m integral |u|^p) / p,
//   P = stabilization penalty, B = (integral |u|^q) / q.
// Unimodal on (0, inf) for A, P >= 0, B > 0, q > max(p, 2).
struct FiberingMap {
  double A = 0.0;
  double P = 0.0;
  double B = 0.0;
  double p = 0.0;
  double q = 0.0;

  double value(double t) const {
    return A * std::pow(t, p) + P * t * t - B * std::pow(t, q);
  }
};

FiberingMap fibering_of(const EnergyTerms& terms, const SolverConfig& cfg) {
  FiberingMap fm;
  fm.p = cfg.params.p;
  fm.q = cfg.nonlinearity.exponent();
  fm.A = (cfg.params.alpha * terms.local + cfg.params.beta * terms.nonlocal +
          cfg.nonlinearity.mass() * terms.mass_p) /
         fm.p;
  fm.P = terms.penalty;
  fm.B = terms.mass_q / fm.q;
  return fm;
}

// Golden-section maximization on [1e-3, 1e3]; the map is unimodal there
// for A, B > 0 and p < q.
double fibering_maximizer(const FiberingMap& fm) {
  if (!(fm.A > 0.0) || !(fm.B > 0.0))
    throw SolverError("ground_state: degenerate fibering map (iterate collapsed)");
  constexpr double inv_phi = 0.61803398874989484820;
  double a = 1e-3, b = 1e3;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fm.value(c), fd = fm.value(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fm.value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fm.value(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<GridFunction> bump_test_basis(const GridSpec& spec, int count) {
  if (count < 1) throw std::invalid_argument("bump_test_basis: count must be >= 1");
  const double L = spec.half_width;
  const double h = spec.spacing();
  const std::size_t total = spec.node_count();

  std::vector<GridFunction> basis;
  basis.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double center =
        (count == 1) ? 0.0 : -0.5 * L + static_cast<double>(k) * L / (count - 1);
    double radius = (k % 2 == 0) ? 0.18 * L : 0.30 * L;
    radius = std::min(radius, L - std::fabs(center) - 3.0 * h);
    if (radius <= h) radius = std::max(0.45 * (L - std::fabs(center)), 2.0 * h);

    std::vector<double> values(total, 0.0);
    for (std::size_t node = 0; node < total; ++node) {
      double x[8];
      spec.coords(node, std::span<double>(x, spec.dim));
      x[0] -= center;
      double rho2 = 0.0;
      for (int a = 0; a < spec.dim; ++a) rho2 += x[a] * x[a];
      rho2 /= radius * radius;
      if (rho2 < 1.0 && !spec.on_boundary_layer(node))
        values[node] = std::exp(-1.0 / (1.0 - rho2));
    }
    basis.emplace_back(spec, std::move(values));
  }
  return basis;
}

GroundState ground_state(const SolverConfig& cfg) {
  if (cfg.nonlinearity.kind() != Nonlinearity::Kind::PowerMinusMass)
    throw std::invalid_argument("ground_state: nonlinearity must be power_minus_mass");
  if (!(cfg.nonlinearity.exponent() > cfg.params.p))
    throw std::invalid_argument("ground_state: needs q > p (focusing subcritical structure)");
  if (cfg.grid.dim != cfg.params.dim || cfg.norm.dim() != cfg.params.dim)
    throw std::invalid_argument("ground_state: dimension mismatch");
  if (!(cfg.tol_grad > 0.0) || cfg.max_iters < 1 || !(cfg.step0 > 0.0) ||
      !(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0) ||
      !(cfg.armijo_shrink > 0.0 && cfg.armijo_shrink < 1.0))
    throw std::invalid_argument("ground_state: bad solver parameters");

  const GridSpec& spec = cfg.grid;
  const OperatorParams& params = cfg.params;
  const std::size_t total = spec.node_count();
  const double p = params.p;
  const double q = cfg.nonlinearity.exponent();
  const double cell = std::pow(spec.spacing(), spec.dim);

  const GridFunction init = sample(cfg.init, spec);
  if (init.max_abs() == 0.0)
    throw std::invalid_argument("ground_state: zero initial iterate (fibering map degenerate)");
  if (init.decay_margin() > 1e-6 * init.max_abs())
    throw std::invalid_argument("ground_state: initial iterate must (almost) vanish on the boundary layer");

  // Quadrature weights w_k h^n, the test basis, its gradients and norms.
  std::vector<double> wq(total);
  for (std::size_t k = 0; k < total; ++k) wq[k] = cell * spec.quad_weight(k);

  const std::vector<GridFunction> basis = bump_test_basis(spec, cfg.test_basis_size);
  std::vector<VectorGridFunction> basis_grad;
  std::vector<double> basis_norm;
  basis_grad.reserve(basis.size());
  for (const GridFunction& phi : basis) {
    basis_grad.push_back(gradient(phi));
    double energy = pairwise_map_sum(0, total, [&](std::size_t k) {
      return wq[k] * pow_abs(phi.value(k), p);
    });
    if (params.has_local()) energy += params.alpha * local_energy(phi, cfg.norm, params);
    if (params.has_nonlocal())
      energy += params.beta *
                gagliardo_seminorm(phi, params, TailPolicy::zero_extension).value;
    basis_norm.push_back(std::pow(energy, 1.0 / p));
  }

  const double h = spec.spacing();
  const double mu = cfg.stabilization * h * h * h * h;

  // Second differences along every axis, zero where the stencil leaves the
  // grid; shared by the penalty value and its gradient.
  const auto second_differences = [&](std::span<const double> w) {
    std::vector<std::vector<double>> d2(spec.dim, std::vector<double>(total, 0.0));
    const double invh2 = 1.0 / (h * h);
    for (int a = 0; a < spec.dim; ++a) {
      const std::size_t str = spec.stride(a);
      for (std::size_t k = 0; k < total; ++k) {
        const int idx = spec.axis_index(k, a);
        if (idx == 0 || idx == spec.points_per_axis - 1) continue;
        d2[a][k] = (w[k + str] - 2.0 * w[k] + w[k - str]) * invh2;
      }
    }
    return d2;
  };

  const auto evaluate_terms = [&](const GridFunction& w) {
    EnergyTerms t;
    if (params.has_local()) t.local = local_energy(w, cfg.norm, params);
    if (params.has_nonlocal())
      t.nonlocal = gagliardo_seminorm(w, params, TailPolicy::zero_extension).value;
    t.mass_p = pairwise_map_sum(0, total, [&](std::size_t k) {
      return wq[k] * pow_abs(w.value(k), p);
    });
    t.mass_q = pairwise_map_sum(0, total, [&](std::size_t k) {
      return wq[k] * pow_abs(w.value(k), q);
    });
    if (mu > 0.0) {
      const auto d2 = second_differences(w.values());
      double acc = 0.0;
      for (int a = 0; a < spec.dim; ++a)
        acc += pairwise_map_sum(0, total, [&](std::size_t k) {
          return d2[a][k] * d2[a][k];
        });
      t.penalty = mu * cell * acc;
    }
    return t;
  };

  const auto scaled_terms = [&](const EnergyTerms& t, double scale) {
    EnergyTerms out;
    const double sp = std::pow(scale, p);
    const double sq = std::pow(scale, q);
    out.local = sp * t.local;
    out.nonlocal = sp * t.nonlocal;
    out.mass_p = sp * t.mass_p;
    out.mass_q = sq * t.mass_q;
    out.penalty = scale * scale * t.penalty;
    return out;
  };

  // Rescale the initial iterate onto the Nehari set.
  EnergyTerms terms = evaluate_terms(init);
  FiberingMap fm = fibering_of(terms, cfg);
  double tstar = fibering_maximizer(fm);

  std::vector<double> u(init.values().begin(), init.values().end());
  for (double& v : u) v *= tstar;
  terms = scaled_terms(terms, tstar);
  double energy = fibering_of(terms, cfg).value(1.0);

  SolverTrace trace;
  trace.iterates_energy.push_back(energy);

  std::vector<double> direction(total, 0.0);
  std::vector<double> trial(total);
  double step = cfg.step0;
  double residual = std::numeric_limits<double>::infinity();

  const auto check_nan = [&](double x) {
    if (!std::isfinite(x)) throw SolverError("ground_state: energy diverged (NaN/inf)");
    return x;
  };
  check_nan(energy);

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    GridFunction uf(spec, std::vector<double>(u));

    // Descent direction from the operator applications. The double weight
    // on the nonlocal part matches the derivative of E_nl/p, whose
    // symmetric double sum differentiates to twice the nodewise operator.
    GridFunction A = params.has_local()
                         ? apply_anisotropic_p_laplacian(uf, cfg.norm, params)
                         : GridFunction(spec, std::vector<double>(total, 0.0));
    GridFunction B = params.has_nonlocal()
                         ? apply_fractional_p_laplacian(uf, params)
                         : GridFunction(spec, std::vector<double>(total, 0.0));
    const auto d2 = (mu > 0.0) ? second_differences(uf.values())
                               : std::vector<std::vector<double>>{};

    // Derivative of the diagonal-strip compensation inside the Gagliardo
    // energy: a pseudo-p-Laplacian-like stencil term -c (j_p(u'))'.
    std::vector<double> jd;
    double diag_coeff = 0.0;
    if (params.has_nonlocal() && spec.dim == 1) {
      const double psp = p - params.s * p;
      diag_coeff = 2.0 * std::pow(0.5 * h, psp) / psp;
      const VectorGridFunction gu = gradient(uf);
      jd.resize(total);
      for (std::size_t k = 0; k < total; ++k)
        jd[k] = spec.quad_weight(k) * j_p(gu.components[0][k], p);
    }

    double gnorm2 = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      if (spec.on_boundary_layer(k)) {
        direction[k] = 0.0;
        continue;
      }
      direction[k] = params.alpha * A.value(k) + 2.0 * params.beta * B.value(k) -
                     cfg.nonlinearity.f(u[k], p);
      if (!jd.empty()) {
        // Exact adjoint of the gradient stencils in the compensation term:
        // central rows k-1 and k+1 plus the one-sided rows at the box
        // edges. The one-sided pieces matter once the iterate grows the
        // fat polynomial tails of fractional ground states.
        double t = 0.0;
        if (k >= 2) t += jd[k - 1];
        if (k + 2 < total) t -= jd[k + 1];
        if (k == 1) t += 4.0 * jd[0];
        if (k == 2) t -= jd[0];
        if (k == total - 2) t -= 4.0 * jd[total - 1];
        if (k == total - 3) t += jd[total - 1];
        direction[k] += params.beta * diag_coeff * t / (2.0 * h * spec.quad_weight(k));
      }
      if (mu > 0.0) {
        // adjoint of the second-difference stencil applied to d2
        double pen = 0.0;
        for (int a = 0; a < spec.dim; ++a) {
          const std::size_t str = spec.stride(a);
          const double dm = (k >= str) ? d2[a][k - str] : 0.0;
          const double dp = (k + str < total) ? d2[a][k + str] : 0.0;
          pen += dm - 2.0 * d2[a][k] + dp;
        }
        direction[k] += (2.0 * mu / (h * h)) * pen;
      }
      gnorm2 += wq[k] * direction[k] * direction[k];
    }

    // Weak residual over the bump basis, via the already-computed operator
    // applications (algebraically the same integrals as weak_residual()).
    if (iter % cfg.residual_check_interval == 0) {
      const VectorGridFunction gu = gradient(uf);
      double worst = 0.0;
      for (std::size_t b = 0; b < basis.size(); ++b) {
        double num = 0.0;
        if (params.has_local()) {
          double acc = 0.0;
          for (std::size_t k = 0; k < total; ++k) {
            double gv[8], fv[8];
            for (int a = 0; a < spec.dim; ++a) gv[a] = gu.components[a][k];
            bool zero = true;
            for (int a = 0; a < spec.dim; ++a)
              if (gv[a] != 0.0) zero = false;
            if (zero) continue;
            const double H = cfg.norm.eval(std::span<const double>(gv, spec.dim));
            if (H == 0.0) continue;
            cfg.norm.grad(std::span<const double>(gv, spec.dim),
                          std::span<double>(fv, spec.dim));
            const double scale = std::pow(H, p - 1.0);
            double dot = 0.0;
            for (int a = 0; a < spec.dim; ++a)
              dot += scale * fv[a] * basis_grad[b].components[a][k];
            acc += wq[k] * dot;
          }
          num += params.alpha * acc;
        }
        if (params.has_nonlocal()) {
          double acc = 0.0;
          for (std::size_t k = 0; k < total; ++k)
            acc += wq[k] * B.value(k) * basis[b].value(k);
          num += 2.0 * params.beta * acc;
          if (!jd.empty()) {
            double dacc = 0.0;
            for (std::size_t k = 0; k < total; ++k)
              dacc += jd[k] * basis_grad[b].components[0][k];
            num += params.beta * diag_coeff * cell * dacc;
          }
        }
        double source = 0.0;
        for (std::size_t k = 0; k < total; ++k)
          source += wq[k] * cfg.nonlinearity.f(u[k], p) * basis[b].value(k);
        num -= source;
        worst = std::max(worst, std::fabs(num) / basis_norm[b]);
      }
      residual = worst;
      if (residual <= cfg.tol_grad) {
        trace.converged = true;
        break;
      }
    }

    if (gnorm2 == 0.0) {
      trace.converged = residual <= cfg.tol_grad;
      break;
    }

    // Armijo backtracking on the Nehari-rescaled energy. The warm start
    // doubles the last accepted step so the search stays near the stable
    // step size instead of backtracking from step0 every time.
    bool accepted = false;
    double sigma = std::min(2.0 * step, 1e6 * cfg.step0);
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t k = 0; k < total; ++k) trial[k] = u[k] - sigma * direction[k];
      EnergyTerms tt;
      bool finite = true;
      try {
        tt = evaluate_terms(GridFunction(spec, std::vector<double>(trial)));
      } catch (const std::invalid_argument&) {
        finite = false;  // NaN/inf values rejected by GridFunction
      }
      if (finite && std::isfinite(tt.mass_q) && tt.mass_q > 0.0) {
        FiberingMap fmt = fibering_of(tt, cfg);
        if (fmt.A > 0.0 && fmt.B > 0.0) {
          const double ts = fibering_maximizer(fmt);
          const double candidate = fmt.value(ts);
          if (std::isfinite(candidate) &&
              candidate <= energy - cfg.armijo_c * sigma * gnorm2) {
            for (std::size_t k = 0; k < total; ++k) u[k] = ts * trial[k];
            terms = scaled_terms(tt, ts);
            energy = check_nan(candidate);
            step = sigma;
            accepted = true;
            break;
          }
        }
      }
      sigma *= cfg.armijo_shrink;
    }
    if (!accepted) {
      // Line search exhausted: the iterate is as stationary as this
      // discretization allows. Report convergence status from the last
      // residual measurement.
      trace.converged = residual <= cfg.tol_grad;
      break;
    }
    trace.iterates_energy.push_back(energy);
  }

  trace.iterations_used = iter;

  GridFunction out(spec, std::move(u));
  trace.final_grad_norm =
      weak_residual(out, cfg.norm, params, cfg.nonlinearity, basis);
  if (trace.final_grad_norm <= cfg.tol_grad) trace.converged = true;
  return GroundState{std::move(out), std::move(trace)};
}

}  // namespace poho
