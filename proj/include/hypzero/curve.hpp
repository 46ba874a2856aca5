#pragma once

#include <string>
#include <vector>

#include "hypzero/exact_poly.hpp"
#include "hypzero/mp.hpp"
#include "hypzero/schedule.hpp"

namespace hypzero {

/// A(z, w) = prod_i (z w + alpha_i) - w prod_j (z w + beta_j) = M(zw) - w N(zw),
/// the equation satisfied by limits of the Cauchy transforms.
struct BivariateCurve {
  std::vector<ComplexRational> alphas;
  std::vector<ComplexRational> betas;
  /// M(u) = prod (u + alpha_i); coefficient k is e_{A-k}(alpha).
  ExactPoly m_poly;
  /// N(u) = prod (u + beta_j).
  ExactPoly n_poly;
  /// terms[j][k] multiplies z^j w^k.
  std::vector<std::vector<ComplexRational>> terms;

  std::size_t w_degree() const { return alphas.size(); }
  /// The polynomial in z multiplying w^k.
  ExactPoly w_coefficient(std::size_t k) const;

  ComplexRational evaluate(const ComplexRational& z, const ComplexRational& w) const;
  /// Same value through M(zw) - w N(zw).
  ComplexRational evaluate_structured(const ComplexRational& z, const ComplexRational& w) const;
  /// Coefficients in w of A(z, .) at a numeric z.
  std::vector<BigComplex> w_polynomial_at(const BigComplex& z) const;

  /// "j k re im" per nonzero term, exact rationals.
  std::string export_terms() const;
};

/// Requires A = B + 1 and every alpha_i != 0.
BivariateCurve build_curve(const ParameterSchedule& schedule);

/// The A roots in w of A(z, .), sorted lexicographically. Rejects z = 0 and z = 1, where the
/// leading coefficient z^B (z - 1) vanishes.
std::vector<BigComplex> branches_at(const BivariateCurve& curve, const BigComplex& z, int precision_bits);

/// Res_w(A, dA/dw) divided by the leading coefficient z^B (z - 1): the w-discriminant up to sign.
ExactPoly w_discriminant(const BivariateCurve& curve);

struct BranchPointSet {
  bool degenerate = false;
  /// Degenerate schedules: alpha_i / (alpha_i + 1), i = 2..A, exact.
  std::vector<ComplexRational> exact_points;
  /// Reported branch points (exact_points rounded, or discriminant zeros in the general case).
  std::vector<BigComplex> points;
  ExactPoly discriminant;
  /// Zeros of the squarefree discriminant away from {0, 1}.
  std::vector<BigComplex> discriminant_roots;
  /// Degenerate case: largest distance from an exact point to the nearest discriminant zero.
  double cross_check_distance = 0.0;
  /// General-type diagnostic for the schedule.
  std::string diagnostic;
};

/// Throws InvalidInput when the discriminant vanishes identically (non-reduced curve).
BranchPointSet branch_points(const BivariateCurve& curve, const ParameterSchedule& schedule, int precision_bits = 256);

struct Prop3Branch {
  std::string label;
  /// Numerator of A(z, N/D) D^A as a polynomial in z; empty when the branch solves the curve.
  ExactPoly residual;
};

struct Prop3Report {
  std::vector<Prop3Branch> branches;
  bool all_vanish = false;
};

/// Substitutes w = 1/(z-1) and w = -alpha_i/z into A exactly. Requires beta_j = alpha_{j+1}.
Prop3Report verify_prop3(const ParameterSchedule& schedule);

/// One "re im" line per point at the given number of significant digits.
std::string export_branch_points(const BranchPointSet& set, int digits);

}  // namespace hypzero
