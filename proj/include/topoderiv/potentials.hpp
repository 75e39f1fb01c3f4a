#pragma once

#include <functional>

#include "topoderiv/kernels.hpp"
#include "topoderiv/moments.hpp"

namespace topoderiv {

/// prefactor * int_omega K(x - y) density(y) dy for K the Laplace or
/// biharmonic fundamental solution.
///
/// The integral is taken in polar coordinates around x. Along each ray the
/// density is a polynomial in the distance and the radial integral is done in
/// closed form, so only the angular variable is discretized. The angular
/// quadrature is graded toward the directions where the chord length is
/// nearly singular (x close to the boundary of omega).
class PotentialEvaluator {
 public:
  PotentialEvaluator(InclusionShape shape, Polynomial density, KernelKind kind, double prefactor = 1.0);

  double operator()(const Vec& x) const;

  const InclusionShape& shape() const { return shape_; }
  const Polynomial& density() const { return density_; }
  KernelKind kind() const { return kind_; }
  double prefactor() const { return prefactor_; }
  int dim() const { return shape_.dim; }

 private:
  double ray(const Vec& x, const Vec& dir, double r1, double r2) const;
  double ball2(const Vec& x) const;
  double ball3(const Vec& x) const;
  double polygon(const Vec& x) const;
  double tets(const Vec& x) const;

  InclusionShape shape_;
  Polynomial density_;
  KernelKind kind_;
  double prefactor_;
  std::vector<std::array<int, 3>> faces_;
};

/// U^(k): Newton potential of F^(k) over omega.
PotentialEvaluator newton_potential(int k, const DataJet& jet, const InclusionShape& shape);
/// P^(k) = -alpha1 * int_omega phi(x - y) F^(k)(y) dy.
PotentialEvaluator biharmonic_potential(int k, const DataJet& jet, const InclusionShape& shape, double alpha1);

double eval_U(int k, const Vec& x, const DataJet& jet, const InclusionShape& shape);
double eval_P(int k, const Vec& x, const DataJet& jet, const InclusionShape& shape, double alpha1);

/// U^(2) for the unit ball and constant data in closed form.
double ball_U2_closed(const Vec& x, int dim, double f_jump);

/// U^(k)(x) - sum_{l <= N} R_l^(k)(x); x must lie outside the ball of radius
/// outer_radius(omega).
double farfield_remainder(int k, int N, const Vec& x, const DataJet& jet, const InclusionShape& shape,
                          const MomentTable& moments);

/// int_omega g dy with a rule exact for polynomials of the given degree on
/// balls and simplices.
double integrate_over_shape(const InclusionShape& shape, const std::function<double(const Vec&)>& g, int degree);

}  // namespace topoderiv
