#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "topoderiv/polynomial.hpp"

namespace topoderiv {

/// Inclusion shape omega: unit ball, a simple polygon (d=2) or a tetrahedral
/// mesh (d=3). Shapes must contain the origin strictly. A C^1 boundary is
/// assumed by the theory but not enforced here.
struct InclusionShape {
  enum class Kind { Ball, Polygon, TetMesh };
  Kind kind = Kind::Ball;
  int dim = 2;
  std::vector<Vec> vertices;               // polygon (CCW or CW) or mesh nodes
  std::vector<std::array<int, 4>> tets;    // tet mesh connectivity

  static InclusionShape ball(int dim);
  static InclusionShape polygon(std::vector<Vec> vertices);
  static InclusionShape tet_mesh(std::vector<Vec> vertices, std::vector<std::array<int, 4>> tets);

  /// Radius of the smallest origin-centered ball containing the shape.
  double outer_radius() const;
  bool contains(const Vec& x) const;
  /// Distance from x to the shape boundary (for margins and near-field logic).
  double boundary_distance(const Vec& x) const;
  std::string kind_name() const;
};

/// Throws std::invalid_argument listing problems (origin margin, degenerate
/// simplices, orientation).
void validate_shape(const InclusionShape& shape);

/// Boundary triangles of a tet mesh, ordered so the normal points out.
std::vector<std::array<int, 3>> outward_boundary_faces(const InclusionShape& shape);

/// Exact monomial moments M_a = int_omega x^a dx up to total degree n_max.
struct MomentTable {
  int dim = 2;
  int n_max = 0;
  std::map<Exponent, double> values;

  double measure() const;
  /// Throws std::out_of_range when the exponent exceeds n_max.
  double at(const Exponent& e) const;
};

constexpr int kMaxMomentDegree = 12;

MomentTable compute_moments(const InclusionShape& shape, int n_max);

/// Sum of coeff_a * M_a; throws when the polynomial degree exceeds n_max.
double weighted_moment(const MomentTable& table, const Polynomial& poly);

/// True iff the shape is invariant under every coordinate sign flip.
bool is_symmetric(const InclusionShape& shape);

/// Taylor data of the problem coefficients at x0, stored as polynomials in the
/// local variable y = x - x0.
struct DataJet {
  Vec x0{};
  int order = 0;
  Polynomial f1, f2, diff, u_star;  // diff = f1 - f2
};

DataJet make_data_jet(const Polynomial& f1, const Polynomial& f2, const Polynomial& u_star,
                      const Vec& x0, int order);

/// Homogeneous polynomial of degree k-2 from the Taylor expansion of f1-f2;
/// zero for k = 1.
Polynomial F_polynomial(int k, const DataJet& jet);

}  // namespace topoderiv
