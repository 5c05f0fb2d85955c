#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <vector>

#include "poho/pohozaev.hpp"
#include "poho/solver.hpp"

using namespace poho;

namespace {

SolverConfig local_soliton_config(int N, double tol) {
  SolverConfig cfg(OperatorParams(1, 2.0, 0.5, 1.0, 0.0), FinslerNorm::euclidean(1),
                   Nonlinearity::power_minus_mass(4.0, 1.0), GridSpec(1, 20.0, N));
  cfg.init = Preset::gaussian(1.0);
  cfg.tol_grad = tol;
  cfg.max_iters = 200000;
  return cfg;
}

}  // namespace

TEST_CASE("configuration validation") {
  SolverConfig cfg = local_soliton_config(257, 1e-3);
  CHECK_THROWS_AS(
      (void)ground_state(SolverConfig(cfg.params, cfg.norm,
                                      Nonlinearity::signed_power(4.0, 1.0, 0.0), cfg.grid)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)ground_state(SolverConfig(cfg.params, cfg.norm,
                                      Nonlinearity::power_minus_mass(1.5, 1.0), cfg.grid)),
      std::invalid_argument);  // q <= p

  SolverConfig flat = cfg;
  flat.init = Preset::bump(30.0);  // support hits the boundary layer
  CHECK_THROWS_AS((void)ground_state(flat), std::invalid_argument);

  // the zero iterate makes the fibering map degenerate
  SolverConfig zero = cfg;
  const char* zpath = "solver_zero_init.txt";
  poho::save_table(GridFunction(cfg.grid, std::vector<double>(cfg.grid.node_count(), 0.0)),
                   zpath);
  zero.init = Preset::custom_table(zpath);
  CHECK_THROWS_AS((void)ground_state(zero), std::invalid_argument);
  std::remove(zpath);
}

TEST_CASE("bump basis vanishes on the boundary and is nontrivial") {
  const GridSpec spec(1, 20.0, 257);
  const auto basis = bump_test_basis(spec, 20);
  REQUIRE(basis.size() == 20);
  for (const auto& phi : basis) {
    CHECK(phi.decay_margin() == 0.0);
    CHECK(phi.max_abs() > 0.0);
  }
}

TEST_CASE("local ground state on a coarse grid") {
  const SolverConfig cfg = local_soliton_config(257, 5e-4);
  const GroundState gs = ground_state(cfg);

  CHECK(gs.trace.converged);
  CHECK(gs.trace.final_grad_norm <= cfg.tol_grad);

  // monotone energies, always
  for (std::size_t k = 1; k < gs.trace.iterates_energy.size(); ++k)
    CHECK(gs.trace.iterates_energy[k] <= gs.trace.iterates_energy[k - 1]);

  // sup distance to sqrt(2) sech(x); coarse grid, coarse tolerance
  const GridSpec& spec = cfg.grid;
  double sup = 0.0;
  for (std::size_t k = 0; k < gs.u.size(); ++k) {
    const double x = spec.node(static_cast<int>(k));
    sup = std::max(sup, std::fabs(gs.u.value(k) - std::sqrt(2.0) / std::cosh(x)));
  }
  CHECK(sup <= 5e-2);

  // even-symmetric init on the mirror-exact grid stays even-symmetric
  double asym = 0.0;
  for (std::size_t k = 0; k < gs.u.size(); ++k)
    asym = std::max(asym, std::fabs(gs.u.value(k) - gs.u.value(gs.u.size() - 1 - k)));
  CHECK(asym <= 1e-10);

  // the fibering rescale pins the iterate to the Nehari set
  const auto rep = pohozaev_residual(gs.u, cfg.norm, cfg.params, cfg.nonlinearity);
  CHECK(std::fabs(rep.nehari_residual) <= 10.0 * cfg.tol_grad * rep.relative_scale);
}

TEST_CASE("fractional ground state converges on a coarse grid") {
  SolverConfig cfg(OperatorParams(1, 2.0, 0.75, 0.0, 1.0), FinslerNorm::euclidean(1),
                   Nonlinearity::power_minus_mass(4.0, 1.0), GridSpec(1, 20.0, 257));
  cfg.init = Preset::gaussian(1.0);
  cfg.tol_grad = 1e-3;
  cfg.max_iters = 100000;

  const GroundState gs = ground_state(cfg);
  CHECK(gs.trace.converged);
  for (std::size_t k = 1; k < gs.trace.iterates_energy.size(); ++k)
    CHECK(gs.trace.iterates_energy[k] <= gs.trace.iterates_energy[k - 1]);

  const auto rep = pohozaev_residual(gs.u, cfg.norm, cfg.params, cfg.nonlinearity);
  CHECK(std::fabs(rep.nehari_residual) <= 10.0 * cfg.tol_grad * rep.relative_scale);
}
