#include "poho/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace poho::reference {

namespace {

double node_distance(const GridSpec& spec, std::size_t i, std::size_t j) {
  double xi[8], xj[8];
  spec.coords(i, std::span<double>(xi, spec.dim));
  spec.coords(j, std::span<double>(xj, spec.dim));
  double d2 = 0.0;
  for (int a = 0; a < spec.dim; ++a) d2 += (xi[a] - xj[a]) * (xi[a] - xj[a]);
  return std::sqrt(d2);
}

}  // namespace

double local_energy(const GridFunction& u, const FinslerNorm& norm,
                    const OperatorParams& params) {
  const GridSpec& spec = u.spec();
  const VectorGridFunction g = gradient(u);
  double acc = 0.0;
  for (std::size_t k = 0; k < spec.node_count(); ++k) {
    double gv[8];
    for (int a = 0; a < spec.dim; ++a) gv[a] = g.components[a][k];
    const double H = norm.eval(std::span<const double>(gv, spec.dim));
    acc += spec.quad_weight(k) * std::pow(H, params.p);
  }
  return acc * std::pow(spec.spacing(), spec.dim);
}

GagliardoResult gagliardo_seminorm(const GridFunction& u, const OperatorParams& params,
                                   TailPolicy policy) {
  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const double expo = -(spec.dim + params.s * params.p);
  const double cell = std::pow(spec.spacing(), spec.dim);

  double pairs = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (i == j) continue;
      pairs += spec.quad_weight(i) * spec.quad_weight(j) *
               std::pow(std::fabs(u.value(i) - u.value(j)), params.p) *
               std::pow(node_distance(spec, i, j), expo);
    }
  }
  pairs *= cell * cell;

  if (spec.dim == 1) {
    // same diagonal-strip compensation as the parallel kernel
    const double psp = params.p - params.s * params.p;
    const double coeff = 2.0 * std::pow(0.5 * spec.spacing(), psp) / psp;
    const VectorGridFunction g = gradient(u);
    double diag = 0.0;
    for (std::size_t k = 0; k < total; ++k)
      diag += spec.quad_weight(k) * std::pow(std::fabs(g.components[0][k]), params.p);
    pairs += cell * coeff * diag;
  }

  const std::vector<double> T = tail_integrals(spec, params);
  double tail = 0.0;
  for (std::size_t k = 0; k < total; ++k)
    tail += spec.quad_weight(k) * std::pow(std::fabs(u.value(k)), params.p) * T[k];
  tail *= 2.0 * cell;

  GagliardoResult r;
  r.tail_bound = tail;
  r.value = (policy == TailPolicy::zero_extension) ? pairs + tail : pairs;
  return r;
}

GridFunction apply_fractional_p_laplacian(const GridFunction& u,
                                          const OperatorParams& params) {
  if (!params.has_nonlocal())
    throw std::invalid_argument("reference fractional operator: requires beta > 0");
  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  const double expo = -(spec.dim + params.s * params.p);
  const double cell = std::pow(spec.spacing(), spec.dim);
  const std::vector<double> T = tail_integrals(spec, params);

  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < total; ++j) {
      if (i == j) continue;
      row += spec.quad_weight(j) * j_p(u.value(i) - u.value(j), params.p) *
             std::pow(node_distance(spec, i, j), expo);
    }
    out[i] = cell * row + j_p(u.value(i), params.p) * T[i];
  }
  return GridFunction(spec, std::move(out));
}

}  // namespace poho::reference
