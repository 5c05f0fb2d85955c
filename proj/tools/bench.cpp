// Benchmark of the OpenMP kernels against the serial reference
// implementations, plus a bitwise determinism check across thread counts.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <omp.h>

#include "poho/energy.hpp"
#include "poho/reference.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void run_size(int N) {
  const poho::GridSpec spec(1, 12.0, N);
  const poho::GridFunction u = poho::sample(poho::Preset::gaussian(1.0), spec);
  const poho::OperatorParams params(1, 2.0, 0.5, 1.0, 1.0);
  const poho::FinslerNorm norm = poho::FinslerNorm::euclidean(1);

  auto t0 = Clock::now();
  const double ref_gag =
      poho::reference::gagliardo_seminorm(u, params, poho::TailPolicy::zero_extension).value;
  const double t_ref_gag = ms_since(t0);

  t0 = Clock::now();
  const double par_gag =
      poho::gagliardo_seminorm(u, params, poho::TailPolicy::zero_extension).value;
  const double t_par_gag = ms_since(t0);

  t0 = Clock::now();
  const poho::GridFunction ref_op = poho::reference::apply_fractional_p_laplacian(u, params);
  const double t_ref_op = ms_since(t0);

  t0 = Clock::now();
  const poho::GridFunction par_op = poho::apply_fractional_p_laplacian(u, params);
  const double t_par_op = ms_since(t0);

  t0 = Clock::now();
  const double ref_loc = poho::reference::local_energy(u, norm, params);
  const double t_ref_loc = ms_since(t0);

  t0 = Clock::now();
  const double par_loc = poho::local_energy(u, norm, params);
  const double t_par_loc = ms_since(t0);

  double op_dev = 0.0;
  for (std::size_t k = 0; k < par_op.size(); ++k)
    op_dev = std::max(op_dev, std::fabs(par_op.value(k) - ref_op.value(k)) /
                                  std::max(1.0, std::fabs(ref_op.value(k))));

  std::printf("N=%5d  gagliardo  serial %8.2f ms  parallel %8.2f ms  x%.2f  dev %.2e\n",
              N, t_ref_gag, t_par_gag, t_ref_gag / t_par_gag,
              std::fabs(par_gag - ref_gag) / ref_gag);
  std::printf("N=%5d  frac. op   serial %8.2f ms  parallel %8.2f ms  x%.2f  dev %.2e\n",
              N, t_ref_op, t_par_op, t_ref_op / t_par_op, op_dev);
  std::printf("N=%5d  local      serial %8.2f ms  parallel %8.2f ms  x%.2f  dev %.2e\n",
              N, t_ref_loc, t_par_loc, t_ref_loc / t_par_loc,
              std::fabs(par_loc - ref_loc) / ref_loc);

  // Thread count must not change a single bit.
  omp_set_num_threads(1);
  const double one = poho::gagliardo_seminorm(u, params, poho::TailPolicy::zero_extension).value;
  omp_set_num_threads(4);
  const double four = poho::gagliardo_seminorm(u, params, poho::TailPolicy::zero_extension).value;
  std::printf("N=%5d  determinism across threads: %s\n", N,
              (one == four) ? "bitwise identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("POHOZAEV_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) omp_set_num_threads(t);
  }
  std::vector<int> sizes{512, 1024, 2048};
  if (argc > 1) {
    sizes.clear();
    for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
  }
  for (int N : sizes) run_size(N);
  return 0;
}
