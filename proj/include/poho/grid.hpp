#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poho {

/// Uniform node-centered grid on the box [-L, L]^n, N points per axis,
/// boundary nodes included (N-1 intervals, spacing h = 2L/(N-1)).
///
/// Node coordinates are (i - (N-1)/2) * h, which makes the grid mirror
/// symmetric to the last bit: node(N-1-i) == -node(i) exactly.
struct GridSpec {
  GridSpec(int dim, double half_width, int points_per_axis);

  int dim;
  double half_width;
  int points_per_axis;

  double spacing() const;
  double node(int i) const;
  std::size_t node_count() const;

  /// Row-major flattening, axis 0 slowest.
  std::size_t stride(int axis) const;
  int axis_index(std::size_t flat, int axis) const;
  void coords(std::size_t flat, std::span<double> out) const;

  /// Product of per-axis trapezoid weights (1/2 on boundary indices);
  /// always an exact power of two.
  double quad_weight(std::size_t flat) const;
  bool on_boundary_layer(std::size_t flat) const;

  bool operator==(const GridSpec& other) const;
};

/// Immutable samples of a compactly supported function, extended by zero
/// outside the box. decay_margin is the max |value| on the outermost node
/// layer; it quantifies how badly the truncation lies.
class GridFunction {
 public:
  GridFunction(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  double value(std::size_t flat) const { return values_[flat]; }
  std::size_t size() const { return values_.size(); }
  double decay_margin() const { return decay_margin_; }
  double max_abs() const { return max_abs_; }

 private:
  GridSpec spec_;
  std::vector<double> values_;
  double decay_margin_ = 0.0;
  double max_abs_ = 0.0;
};

struct VectorGridFunction {
  GridSpec spec;
  std::vector<std::vector<double>> components;  // one array per axis
};

struct Preset {
  enum class Kind { Gaussian, Bump, SechSoliton, CustomTable };

  Kind kind = Kind::Gaussian;
  double param = 1.0;  // sigma for Gaussian, radius for Bump
  std::string path;    // CustomTable

  static Preset gaussian(double sigma);
  static Preset bump(double radius);
  static Preset sech_soliton();
  static Preset custom_table(std::string path);

  /// Grammar: `gaussian:<sigma>`, `bump:<radius>`, `sech`, `table:<path>`.
  static Preset parse(std::string_view text);
};

/// Nodewise evaluation of the preset:
///   gaussian(sigma)  exp(-|x|^2 / sigma^2)
///   bump(r)          exp(-1/(1 - |x/r|^2)) for |x| < r, 0 outside
///   sech_soliton     sqrt(2) sech(x), dim 1 only
///   custom_table     values from file; its header must match `spec`
GridFunction sample(const Preset& preset, const GridSpec& spec);

/// Reads the text format: first line `n L N`, then N^n node values in
/// row-major order, whitespace separated.
GridFunction load_table(const std::string& path);
void save_table(const GridFunction& u, const std::string& path);

/// Second-order central differences at interior nodes, second-order
/// one-sided stencils on the boundary layer.
VectorGridFunction gradient(const GridFunction& u);

/// Tensor-product trapezoid rule with the deterministic pairwise reduction.
double integrate(const GridFunction& u);

/// Represents u(lambda x): same node values on a grid with half width
/// L/lambda. Discrete energies then rescale by exact powers of lambda
/// because only spacings change.
GridFunction dilate(const GridFunction& u, double lambda);

}  // namespace poho
