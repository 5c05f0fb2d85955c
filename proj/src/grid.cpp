#include "poho/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "poho/reduce.hpp"

namespace poho {

namespace {

constexpr std::size_t kMaxNodes = std::size_t{1} << 26;  // ~67M nodes

std::size_t checked_node_count(int dim, int per_axis) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    if (total > kMaxNodes / static_cast<std::size_t>(per_axis))
      throw std::invalid_argument("GridSpec: N^n exceeds the addressable-node limit");
    total *= static_cast<std::size_t>(per_axis);
  }
  return total;
}

}  // namespace

GridSpec::GridSpec(int dim_, double half_width_, int points_per_axis_)
    : dim(dim_), half_width(half_width_), points_per_axis(points_per_axis_) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("GridSpec: dim must be in [1, 8]");
  if (!(half_width > 0.0)) throw std::invalid_argument("GridSpec: half_width must be positive");
  if (points_per_axis < 8) throw std::invalid_argument("GridSpec: need at least 8 points per axis");
  checked_node_count(dim, points_per_axis);
}

double GridSpec::spacing() const {
  return 2.0 * half_width / static_cast<double>(points_per_axis - 1);
}

double GridSpec::node(int i) const {
  const double center = 0.5 * static_cast<double>(points_per_axis - 1);
  return (static_cast<double>(i) - center) * spacing();
}

std::size_t GridSpec::node_count() const {
  return checked_node_count(dim, points_per_axis);
}

std::size_t GridSpec::stride(int axis) const {
  std::size_t s = 1;
  for (int a = dim - 1; a > axis; --a) s *= static_cast<std::size_t>(points_per_axis);
  return s;
}

int GridSpec::axis_index(std::size_t flat, int axis) const {
  return static_cast<int>((flat / stride(axis)) % static_cast<std::size_t>(points_per_axis));
}

void GridSpec::coords(std::size_t flat, std::span<double> out) const {
  const double h = spacing();
  const double center = 0.5 * static_cast<double>(points_per_axis - 1);
  std::size_t rem = flat;
  for (int a = dim - 1; a >= 0; --a) {
    const int idx = static_cast<int>(rem % static_cast<std::size_t>(points_per_axis));
    rem /= static_cast<std::size_t>(points_per_axis);
    out[a] = (static_cast<double>(idx) - center) * h;
  }
}

double GridSpec::quad_weight(std::size_t flat) const {
  double w = 1.0;
  std::size_t rem = flat;
  for (int a = dim - 1; a >= 0; --a) {
    const int idx = static_cast<int>(rem % static_cast<std::size_t>(points_per_axis));
    rem /= static_cast<std::size_t>(points_per_axis);
    if (idx == 0 || idx == points_per_axis - 1) w *= 0.5;
  }
  return w;
}

bool GridSpec::on_boundary_layer(std::size_t flat) const {
  std::size_t rem = flat;
  for (int a = dim - 1; a >= 0; --a) {
    const int idx = static_cast<int>(rem % static_cast<std::size_t>(points_per_axis));
    rem /= static_cast<std::size_t>(points_per_axis);
    if (idx == 0 || idx == points_per_axis - 1) return true;
  }
  return false;
}

bool GridSpec::operator==(const GridSpec& other) const {
  return dim == other.dim && half_width == other.half_width &&
         points_per_axis == other.points_per_axis;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.node_count())
    throw std::invalid_argument("GridFunction: value count does not match the grid");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]))
      throw std::invalid_argument("GridFunction: values must be finite");
    const double a = std::fabs(values_[k]);
    max_abs_ = std::max(max_abs_, a);
    if (spec_.on_boundary_layer(k)) decay_margin_ = std::max(decay_margin_, a);
  }
}

Preset Preset::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian preset: sigma must be positive");
  return Preset{Kind::Gaussian, sigma, {}};
}

Preset Preset::bump(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump preset: radius must be positive");
  return Preset{Kind::Bump, radius, {}};
}

Preset Preset::sech_soliton() { return Preset{Kind::SechSoliton, 0.0, {}}; }

Preset Preset::custom_table(std::string path) {
  return Preset{Kind::CustomTable, 0.0, std::move(path)};
}

Preset Preset::parse(std::string_view text) {
  auto num = [](std::string_view s) {
    char* end = nullptr;
    const std::string tmp(s);
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
      throw std::invalid_argument("preset grammar: bad number '" + tmp + "'");
    return v;
  };
  if (text == "sech") return sech_soliton();
  if (text.rfind("gaussian:", 0) == 0) return gaussian(num(text.substr(9)));
  if (text.rfind("bump:", 0) == 0) return bump(num(text.substr(5)));
  if (text.rfind("table:", 0) == 0) return custom_table(std::string(text.substr(6)));
  throw std::invalid_argument(
      "preset grammar: expected gaussian:<sigma> | bump:<radius> | sech | table:<path>");
}

GridFunction sample(const Preset& preset, const GridSpec& spec) {
  if (preset.kind == Preset::Kind::CustomTable) {
    GridFunction u = load_table(preset.path);
    if (!(u.spec() == spec))
      throw std::invalid_argument("custom_table preset: file grid does not match the requested grid");
    return u;
  }
  if (preset.kind == Preset::Kind::SechSoliton && spec.dim != 1)
    throw std::invalid_argument("sech_soliton preset is one-dimensional");

  const std::size_t total = spec.node_count();
  std::vector<double> values(total);
  const double sqrt2 = std::sqrt(2.0);

#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
    double x[8];
    spec.coords(static_cast<std::size_t>(k), std::span<double>(x, spec.dim));
    double r2 = 0.0;
    for (int a = 0; a < spec.dim; ++a) r2 += x[a] * x[a];
    switch (preset.kind) {
      case Preset::Kind::Gaussian:
        values[k] = std::exp(-r2 / (preset.param * preset.param));
        break;
      case Preset::Kind::Bump: {
        const double rho2 = r2 / (preset.param * preset.param);
        values[k] = (rho2 < 1.0) ? std::exp(-1.0 / (1.0 - rho2)) : 0.0;
        break;
      }
      case Preset::Kind::SechSoliton:
        values[k] = sqrt2 / std::cosh(x[0]);
        break;
      case Preset::Kind::CustomTable:
        break;  // handled above
    }
  }
  return GridFunction(spec, std::move(values));
}

GridFunction load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_table: cannot open '" + path + "'");
  int n = 0, N = 0;
  double L = 0.0;
  if (!(in >> n >> L >> N))
    throw std::invalid_argument("load_table: malformed header, expected `n L N`");
  GridSpec spec(n, L, N);
  std::vector<double> values(spec.node_count());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(in >> values[k]))
      throw std::invalid_argument("load_table: expected " + std::to_string(values.size()) +
                                  " values, file ended at " + std::to_string(k));
  }
  double extra;
  if (in >> extra) throw std::invalid_argument("load_table: trailing data after the value block");
  return GridFunction(spec, std::move(values));
}

void save_table(const GridFunction& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("save_table: cannot open '" + path + "'");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", u.spec().half_width);
  out << u.spec().dim << ' ' << buf << ' ' << u.spec().points_per_axis << '\n';
  for (std::size_t k = 0; k < u.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", u.value(k));
    out << buf << (((k + 1) % 8 == 0) ? '\n' : ' ');
  }
  out << '\n';
}

VectorGridFunction gradient(const GridFunction& u) {
  const GridSpec& spec = u.spec();
  const int N = spec.points_per_axis;
  const double inv2h = 1.0 / (2.0 * spec.spacing());
  const std::size_t total = spec.node_count();
  const std::span<const double> v = u.values();

  VectorGridFunction g{spec, {}};
  g.components.assign(spec.dim, std::vector<double>(total));

  for (int a = 0; a < spec.dim; ++a) {
    const std::size_t str = spec.stride(a);
    std::vector<double>& comp = g.components[a];
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
      const std::size_t kk = static_cast<std::size_t>(k);
      const int idx = spec.axis_index(kk, a);
      if (idx == 0) {
        comp[kk] = (-3.0 * v[kk] + 4.0 * v[kk + str] - v[kk + 2 * str]) * inv2h;
      } else if (idx == N - 1) {
        comp[kk] = (3.0 * v[kk] - 4.0 * v[kk - str] + v[kk - 2 * str]) * inv2h;
      } else {
        comp[kk] = (v[kk + str] - v[kk - str]) * inv2h;
      }
    }
  }
  return g;
}

double integrate(const GridFunction& u) {
  const GridSpec& spec = u.spec();
  const std::size_t total = spec.node_count();
  std::vector<double> terms(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k)
    terms[k] = spec.quad_weight(static_cast<std::size_t>(k)) * u.value(static_cast<std::size_t>(k));
  const double cell = std::pow(spec.spacing(), spec.dim);
  return cell * pairwise_sum(terms);
}

GridFunction dilate(const GridFunction& u, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  GridSpec spec(u.spec().dim, u.spec().half_width / lambda, u.spec().points_per_axis);
  std::vector<double> values(u.values().begin(), u.values().end());
  return GridFunction(spec, std::move(values));
}

}  // namespace poho
