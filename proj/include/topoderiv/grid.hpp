#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "topoderiv/moments.hpp"
#include "topoderiv/polynomial.hpp"

namespace topoderiv {

/// Node-centred structured grid on an axis-aligned box. Faces are ordered
/// x-, x+, y-, y+, z-, z+ and labelled 'D' (Gamma) or 'N' (Sigma).
struct GridSpec {
  int dim = 2;
  Vec lo{0, 0, 0};
  Vec hi{1, 1, 1};
  std::array<int, 3> n{2, 2, 1};
  std::array<char, 6> faces{'D', 'N', 'N', 'N', 'N', 'N'};

  static GridSpec box(int dim, const Vec& lo, const Vec& hi, int nodes, const std::array<char, 6>& faces);

  double h(int axis) const { return (hi[axis] - lo[axis]) / (n[axis] - 1); }
  double max_h() const;
  std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
  }
  std::array<int, 3> ijk(std::size_t idx) const;
  Vec node(std::size_t idx) const;
  /// Width of the dual cell of 1-d node i along axis (h/2 on the box faces).
  double dual_width(int axis, int i) const;
  /// Node lies on a Dirichlet face.
  bool is_dirichlet(std::size_t idx) const;
  std::vector<char> dirichlet_mask() const;

  /// Throws std::invalid_argument listing violated conditions.
  void validate() const;
  bool same_as(const GridSpec& o) const;
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  ScalarField(const GridSpec& g, std::vector<double> v);

  /// d-linear interpolation; x must lie in the box.
  double interpolate(const Vec& x) const;
  double max_abs() const;
};

ScalarField sample(const GridSpec& g, const std::function<double(const Vec&)>& f);
ScalarField sample(const GridSpec& g, const Polynomial& p);

/// Lumped mass: the dual-cell volume of every node.
std::vector<double> lumped_mass(const GridSpec& g);
/// y = K x for the finite-volume stiffness matrix on all nodes (no boundary rows removed).
void apply_stiffness(const GridSpec& g, const std::vector<double>& x, std::vector<double>& y);
std::vector<double> stiffness_diagonal(const GridSpec& g);
/// a^T K b, the discrete Dirichlet form.
double energy_product(const GridSpec& g, const std::vector<double>& a, const std::vector<double>& b);

/// sum M_i (u_i - u*(x_i))^2: trapezoidal rule of the squared misfit.
double integrate_L2_misfit(const ScalarField& u, const Polynomial& u_star);
/// e^T K e with e = u - u*: every grid edge contributes h^(d-2) (difference)^2
/// weighted by its dual face.
double integrate_H1_misfit(const ScalarField& u, const Polynomial& u_star);

/// Local Taylor polynomial of a field at x0, in the variable y = x - x0.
struct PointJet {
  Vec x0{};
  int order = 0;
  Polynomial poly;
  double fit_residual = 0.0;  // max abs residual over the stencil
};

/// Least-squares fit of degree order+2 over the nodes within max(4, order+2)*h
/// of x0, truncated to degree `order`.
PointJet jet_at(const ScalarField& field, const Vec& x0, int order);

/// Fraction of every node's dual cell covered by x0 + eps*omega.
ScalarField char_fraction(const GridSpec& g, const Vec& x0, double eps, const InclusionShape& shape);
/// Fraction of every dual cell covered by the box [lo, hi].
ScalarField box_fraction(const GridSpec& g, const Vec& lo, const Vec& hi);
/// Exact area of the disc |x| < r intersected with [x0,x1] x [y0,y1].
double disc_rect_area(double r, double x0, double x1, double y0, double y1);
/// Volume of the ball |x| < r intersected with an axis-aligned box.
double ball_box_volume(double r, const Vec& lo, const Vec& hi);

/// Writes <stem>.csv (one value per line, x fastest) and <stem>.json (header).
void write_field(const std::string& stem, const ScalarField& f, const std::string& label);

}  // namespace topoderiv
