#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <omp.h>

#include "poho/reduce.hpp"
#include "poho/rng.hpp"

TEST_CASE("pairwise sum matches long-double accumulation") {
  poho::SplitMix64 rng(7);
  std::vector<double> v(100001);
  long double exact = 0.0L;
  for (double& x : v) {
    x = rng.uniform(-1.0, 1.0) * std::exp(rng.uniform(-8.0, 8.0));
    exact += static_cast<long double>(x);
  }
  const double got = poho::pairwise_sum(v);
  CHECK(std::fabs(got - static_cast<double>(exact)) <=
        1e-12 * std::max(1.0, std::fabs(static_cast<double>(exact))));
}

TEST_CASE("pairwise sum of small and empty ranges") {
  CHECK(poho::pairwise_sum({}) == 0.0);
  std::vector<double> one{3.5};
  CHECK(poho::pairwise_sum(one) == 3.5);
  CHECK(poho::pairwise_map_sum(5, 5, [](std::size_t) { return 1.0; }) == 0.0);
}

TEST_CASE("reduction tree is independent of thread count") {
  poho::SplitMix64 rng(11);
  const std::size_t n = 40000;
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();

  auto run = [&](int threads) {
    omp_set_num_threads(threads);
    std::vector<double> terms(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k)
      terms[k] = std::sin(v[k]) * std::exp(-v[k] * v[k]);
    return poho::pairwise_sum(terms);
  };

  const double t1 = run(1);
  const double t3 = run(3);
  const double t4 = run(4);
  CHECK(t1 == t3);
  CHECK(t1 == t4);
}
