#pragma once

#include "poho/energy.hpp"

namespace poho::reference {

// Serial reference implementations of the parallel kernels: plain nested
// loops, naive left-to-right accumulation, no kernel tables. Kept for
// testing the OpenMP kernels and for the benchmark target; not used by the
// library itself.

double local_energy(const GridFunction& u, const FinslerNorm& norm,
                    const OperatorParams& params);

GagliardoResult gagliardo_seminorm(const GridFunction& u,
                                   const OperatorParams& params,
                                   TailPolicy policy);

GridFunction apply_fractional_p_laplacian(const GridFunction& u,
                                          const OperatorParams& params);

}  // namespace poho::reference
