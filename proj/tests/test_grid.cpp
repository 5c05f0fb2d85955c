#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "poho/grid.hpp"
#include "poho/rng.hpp"

using poho::GridFunction;
using poho::GridSpec;
using poho::Preset;

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(GridSpec(1, 10.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, -1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(0, 1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4, 1.0, 4096), std::invalid_argument);  // node-count limit
}

TEST_CASE("grid is mirror symmetric to the last bit") {
  const GridSpec spec(1, 7.3, 129);
  for (int i = 0; i < spec.points_per_axis; ++i)
    CHECK(spec.node(spec.points_per_axis - 1 - i) == -spec.node(i));
}

TEST_CASE("presets") {
  const GridSpec spec(1, 12.0, 257);
  const GridFunction g = poho::sample(Preset::gaussian(1.0), spec);
  CHECK(g.value(128) == 1.0);  // node 0 sits at the center

  const GridFunction b = poho::sample(Preset::bump(1.0), spec);
  for (std::size_t k = 0; k < b.size(); ++k) {
    double x;
    spec.coords(k, std::span<double>(&x, 1));
    if (std::fabs(x) >= 1.0) CHECK(b.value(k) == 0.0);
  }

  const GridFunction s = poho::sample(Preset::sech_soliton(), GridSpec(1, 20.0, 257));
  CHECK(s.value(128) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(poho::sample(Preset::sech_soliton(), GridSpec(2, 5.0, 16)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Preset::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Preset::parse("what:1"), std::invalid_argument);
}

TEST_CASE("custom table round trip and validation") {
  const GridSpec spec(2, 3.0, 9);
  const GridFunction u = poho::sample(Preset::gaussian(1.5), spec);
  const std::string path = "table_roundtrip.txt";
  poho::save_table(u, path);

  const GridFunction v = poho::load_table(path);
  REQUIRE(v.spec() == spec);
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(u.value(k) == v.value(k));

  const GridFunction w = poho::sample(Preset::custom_table(path), spec);
  CHECK(w.value(40) == u.value(40));
  CHECK_THROWS_AS(poho::sample(Preset::custom_table(path), GridSpec(2, 3.0, 11)),
                  std::invalid_argument);

  std::ofstream bad("table_bad.txt");
  bad << "1 2.0 8\n1 2 3\n";  // too few values
  bad.close();
  CHECK_THROWS_AS(poho::load_table("table_bad.txt"), std::invalid_argument);
  CHECK_THROWS_AS(poho::load_table("no_such_file.txt"), std::invalid_argument);
  std::remove(path.c_str());
  std::remove("table_bad.txt");
}

TEST_CASE("gradient: constants and affine functions") {
  const GridSpec spec(2, 2.0, 17);
  std::vector<double> c(spec.node_count(), 4.25);
  const auto gc = poho::gradient(GridFunction(spec, std::move(c)));
  for (int a = 0; a < 2; ++a)
    for (double v : gc.components[a]) CHECK(v == 0.0);

  std::vector<double> lin(spec.node_count());
  for (std::size_t k = 0; k < lin.size(); ++k) {
    double x[2];
    spec.coords(k, std::span<double>(x, 2));
    lin[k] = 1.75 * x[0];
  }
  const auto gl = poho::gradient(GridFunction(spec, std::move(lin)));
  for (std::size_t k = 0; k < gl.components[0].size(); ++k) {
    CHECK(gl.components[0][k] == doctest::Approx(1.75).epsilon(1e-13));
    CHECK(gl.components[1][k] == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("gradient converges at second order on the gaussian") {
  auto max_err = [](int N) {
    const GridSpec spec(1, 8.0, N);
    const auto g = poho::gradient(poho::sample(Preset::gaussian(1.0), spec));
    double worst = 0.0;
    for (int i = 2; i < N - 2; ++i) {
      const double x = spec.node(i);
      worst = std::max(worst,
                       std::fabs(g.components[0][i] + 2.0 * x * std::exp(-x * x)));
    }
    return worst;
  };
  const double e1 = max_err(513);
  const double e2 = max_err(1025);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));  // Richardson ratio
}

TEST_CASE("integrate: gaussian moment and linearity") {
  const GridSpec spec(1, 12.0, 2048);
  const GridFunction g = poho::sample(Preset::gaussian(1.0), spec);
  CHECK(poho::integrate(g) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-8));

  std::vector<double> zero(spec.node_count(), 0.0);
  CHECK(poho::integrate(GridFunction(spec, std::move(zero))) == 0.0);

  poho::SplitMix64 rng(17);
  std::vector<double> a(spec.node_count()), b(spec.node_count()), c(spec.node_count());
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = rng.normal();
    b[k] = rng.normal();
    c[k] = 2.5 * a[k] - 0.75 * b[k];
  }
  const double ia = poho::integrate(GridFunction(spec, std::move(a)));
  const double ib = poho::integrate(GridFunction(spec, std::move(b)));
  const double ic = poho::integrate(GridFunction(spec, std::move(c)));
  CHECK(ic == doctest::Approx(2.5 * ia - 0.75 * ib).epsilon(1e-12));
}

TEST_CASE("bump integral does not depend on the box once it contains the support") {
  // h-matched pair: L=2,N=129 and L=4,N=257 share the node lattice.
  const GridFunction small = poho::sample(Preset::bump(1.0), GridSpec(1, 2.0, 129));
  const GridFunction large = poho::sample(Preset::bump(1.0), GridSpec(1, 4.0, 257));
  CHECK(poho::integrate(small) ==
        doctest::Approx(poho::integrate(large)).epsilon(1e-14));
}

TEST_CASE("dilate bookkeeping") {
  const GridSpec spec(1, 10.0, 129);
  const GridFunction u = poho::sample(Preset::gaussian(1.0), spec);

  const GridFunction same = poho::dilate(u, 1.0);
  CHECK(same.spec() == u.spec());
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(same.value(k) == u.value(k));

  const GridFunction half = poho::dilate(u, 2.0);
  CHECK(half.spec().half_width == 5.0);
  CHECK(half.value(7) == u.value(7));
  // integral scales by lambda^{-n}
  CHECK(poho::integrate(half) == doctest::Approx(0.5 * poho::integrate(u)).epsilon(1e-13));

  CHECK_THROWS_AS(poho::dilate(u, 0.0), std::invalid_argument);
}

TEST_CASE("decay margin quantifies the truncation") {
  const GridFunction g = poho::sample(Preset::gaussian(1.0), GridSpec(1, 12.0, 512));
  CHECK(g.decay_margin() < 1e-60);
  CHECK(g.decay_margin() > 0.0);

  const GridFunction b = poho::sample(Preset::bump(1.0), GridSpec(1, 2.0, 64));
  CHECK(b.decay_margin() == 0.0);
}

TEST_CASE("grid functions must be finite") {
  const GridSpec spec(1, 1.0, 8);
  std::vector<double> v(8, 0.0);
  v[3] = std::nan("");
  CHECK_THROWS_AS(GridFunction(spec, std::move(v)), std::invalid_argument);
}
