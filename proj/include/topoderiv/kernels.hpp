#pragma once

#include <string>
#include <vector>

#include "topoderiv/moments.hpp"
#include "topoderiv/polynomial.hpp"

namespace topoderiv {

enum class KernelKind { Laplace, Biharmonic };

/// -ln|x|/(2 pi) in 2-d, 1/(4 pi |x|) in 3-d. Throws std::domain_error at 0.
double laplace_fundamental(const Vec& x, int dim);
/// (|x|^2 ln|x| - |x|^2)/(8 pi) in 2-d, -|x|/(8 pi) in 3-d.
double biharmonic_fundamental(const Vec& x, int dim);

constexpr int kMaxKernelOrder = 6;

/// (1/m!) d^m/dt^m K(x - t y) at t = 0, from a fixed chain-rule table.
/// Orders above kMaxKernelOrder throw std::domain_error.
double kernel_taylor_term(KernelKind kind, int order, const Vec& x, const Vec& y, int dim);

/// One summand |x|^r_pow * q(x) [* ln|x|] with q homogeneous.
struct MultipolePiece {
  int r_pow = 0;
  bool log = false;
  Polynomial q;
};

/// Homogeneous far-field term. Pieces share the homogeneity degree
/// r_pow + deg q; log pieces pick up a companion under scaling.
class MultipoleTerm {
 public:
  MultipoleTerm() = default;
  MultipoleTerm(int dim, char label, int index, int source_order)
      : dim_(dim), label_(label), index_(index), source_order_(source_order) {}

  int dim() const { return dim_; }
  char label() const { return label_; }
  int index() const { return index_; }
  int source_order() const { return source_order_; }
  std::string name() const;

  const std::vector<MultipolePiece>& pieces() const { return pieces_; }
  void add_piece(int r_pow, bool log, const Polynomial& q);

  bool is_zero() const { return pieces_.empty(); }
  bool has_log() const;
  /// Homogeneity degree; 0 for the zero term.
  int degree() const;

  double operator()(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// T(tau x) = tau^p T(x) + tau^p ln(tau) companion(x).
  MultipoleTerm companion() const;
  /// Copy with the log factor dropped from log pieces and non-log pieces removed.
  MultipoleTerm log_coefficient() const;
  /// Copy keeping only the non-log pieces.
  MultipoleTerm non_log_part() const;
  MultipoleTerm scaled(double s) const;
  MultipoleTerm relabeled(char label, int index, int source_order) const;

 private:
  int dim_ = 2;
  char label_ = 'R';
  int index_ = 0;
  int source_order_ = 0;
  std::vector<MultipolePiece> pieces_;
};

/// Sum of several terms evaluated at the same point, used for boundary data.
double eval_sum(const std::vector<MultipoleTerm>& terms, const Vec& x);
Vec gradient_sum(const std::vector<MultipoleTerm>& terms, const Vec& x);

/// Integral over omega of the order-m Taylor coefficient of the kernel
/// against the density F, contracted with the moment table.
MultipoleTerm kernel_moment_term(KernelKind kind, int order, const Polynomial& density,
                                 const MomentTable& moments);

/// R_l^(k): far-field term of the Newton potential of F^(k). Zero for k = 1.
MultipoleTerm multipole_R(int k, int ell, const DataJet& jet, const MomentTable& moments);

/// S_l^(k): far-field term of the biharmonic potential P^(k), including the
/// -alpha1 prefactor of P. Zero for k <= 1.
MultipoleTerm multipole_S(int k, int ell, const DataJet& jet, const MomentTable& moments, double alpha1);

/// Leading terms of P^(k): {A2, A1, A0, B2, B1, B0} in 2-d (A terms are the
/// factors multiplying ln|x|), {A1, A0, A-1} in 3-d.
std::vector<MultipoleTerm> leading_AB(int k, const DataJet& jet, const MomentTable& moments, double alpha1);

/// b^(k) = -(1/2 pi) int_omega F^(k); zero for k = 1.
double log_constant_b(int k, const DataJet& jet, const MomentTable& moments);

struct LogConstant {
  double b = 0.0;
  double c = 0.0;  // -alpha2 * b
};
LogConstant log_constant(int k, const DataJet& jet, const MomentTable& moments, double alpha2);

}  // namespace topoderiv
