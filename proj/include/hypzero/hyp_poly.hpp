#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypzero/exact_poly.hpp"
#include "hypzero/rational.hpp"
#include "hypzero/schedule.hpp"

namespace hypzero {

/// Rising factorial a (a+1) ... (a+k-1); 1 for k = 0.
ComplexRational pochhammer(const ComplexRational& a, unsigned k);

/// Terminating hypergeometric polynomial with exact coefficients (coeffs[k] multiplies z^k).
struct HypPolynomial {
  ParameterSchedule schedule;
  unsigned n = 0;
  ExactPoly coeffs;
  /// Set when a numerator parameter a_i(n), i >= 2, truncates the series before degree n.
  std::optional<std::string> warning;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Coefficients via the term ratio prod(a_i + k) / (prod(b_j + k) (k + 1)).
/// Rejects any b_j(n) that is a nonpositive integer, naming j (1-based) and the value.
HypPolynomial build_polynomial(const ParameterSchedule& schedule, unsigned n);

/// (d/dz) prod_j (D + b_j - 1) p - prod_i (D + a_i) p with D = z d/dz, using the parameters of
/// p.schedule at p.n. D acts on z^k by multiplication with k, so everything stays exact.
/// The result is stored in coeffs (trimmed; empty means the zero polynomial).
HypPolynomial apply_hypergeometric_operator(const HypPolynomial& p);

/// Roots of prod_i (1 + lambda alpha_i): 1 and -1/alpha_i for i = 2..A.
std::vector<ComplexRational> characteristic_roots(const ParameterSchedule& schedule);

struct GeneralTypeCheck {
  bool general = false;
  std::string diagnostic;
};

/// Simple characteristic roots and no -alpha_i on the real ray (-inf, 1].
GeneralTypeCheck is_general_type(const ParameterSchedule& schedule);

/// One "k re im" line per coefficient, exact rationals written as p/q.
std::string export_polynomial(const HypPolynomial& p);

}  // namespace hypzero
