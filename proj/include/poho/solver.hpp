#pragma once

#include <stdexcept>
#include <vector>

#include "poho/energy.hpp"

namespace poho {

/// Configuration of the ground-state descent. The nonlinearity must be
/// power_minus_mass with q > p (focusing subcritical structure; otherwise
/// the fibering map has no interior maximum and the scheme is meaningless).
struct SolverConfig {
  SolverConfig(OperatorParams params, FinslerNorm norm, Nonlinearity nonlinearity,
               GridSpec grid)
      : params(params), norm(std::move(norm)),
        nonlinearity(nonlinearity), grid(grid) {}

  OperatorParams params;
  FinslerNorm norm;
  Nonlinearity nonlinearity;
  GridSpec grid;
  Preset init = Preset::gaussian(1.0);

  int max_iters = 50000;
  double step0 = 1.0;
  double tol_grad = 1e-3;     // weak-residual stopping threshold
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;

  // Coefficient of the h^4-scaled second-difference penalty added to the
  // descent objective. The checkerboard mode lies in the null space of the
  // central-difference gradient while the potential term has negative
  // curvature along it, so the raw discrete energy is unbounded below on
  // that mode; the penalty restores boundedness and perturbs smooth
  // iterates at O(h^4) only.
  double stabilization = 1.0;

  int residual_check_interval = 25;
  int test_basis_size = 20;
};

struct SolverTrace {
  std::vector<double> iterates_energy;  // non-increasing by construction
  double final_grad_norm = 0.0;         // last weak residual
  int iterations_used = 0;
  bool converged = false;
};

/// Thrown on numerical breakdown (NaN/inf energy). Plain non-convergence is
/// returned in the trace instead.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GroundState {
  GridFunction u;
  SolverTrace trace;
};

/// Monotone descent on J(u) = alpha/p E_loc + beta/p E_nl - integral F(u):
/// the step direction is assembled from the operator applications
/// (alpha * (-H_p u) + 2 beta * (-Delta_p)^s u - f(u)), Armijo backtracking
/// enforces decrease, and after every step the iterate is rescaled by the
/// maximizer t* of the fibering map t -> J(t u), pinning it to the Nehari
/// set. Stops when the weak residual over a fixed bump basis drops below
/// tol_grad.
GroundState ground_state(const SolverConfig& config);

/// The fixed deterministic bump basis used as solver test functions:
/// `count` bumps with centers spread along the first axis and two radius
/// classes, all vanishing on the boundary layer.
std::vector<GridFunction> bump_test_basis(const GridSpec& spec, int count);

}  // namespace poho
