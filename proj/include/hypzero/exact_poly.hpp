#pragma once

#include <span>
#include <vector>

#include "hypzero/rational.hpp"

namespace hypzero {

/// Dense univariate polynomial over the Gaussian rationals; index k holds the z^k coefficient.
/// The empty vector is the zero polynomial.
using ExactPoly = std::vector<ComplexRational>;

namespace poly {

void trim(ExactPoly& p);
/// Degree of a trimmed copy; -1 for the zero polynomial.
int degree(std::span<const ComplexRational> p);
bool is_zero(std::span<const ComplexRational> p);

ComplexRational evaluate(std::span<const ComplexRational> p, const ComplexRational& z);
ExactPoly derivative(std::span<const ComplexRational> p);

ExactPoly add(std::span<const ComplexRational> a, std::span<const ComplexRational> b);
ExactPoly sub(std::span<const ComplexRational> a, std::span<const ComplexRational> b);
ExactPoly mul(std::span<const ComplexRational> a, std::span<const ComplexRational> b);
ExactPoly scale(std::span<const ComplexRational> a, const ComplexRational& c);
ExactPoly power(std::span<const ComplexRational> a, unsigned e);

struct DivMod {
  ExactPoly quotient;
  ExactPoly remainder;
};
/// Euclidean division; throws on a zero divisor.
DivMod divmod(std::span<const ComplexRational> a, std::span<const ComplexRational> b);

/// Monic greatest common divisor (zero polynomial if both inputs are zero).
ExactPoly gcd(std::span<const ComplexRational> a, std::span<const ComplexRational> b);

/// p / gcd(p, p'): same roots, all simple.
ExactPoly squarefree_part(std::span<const ComplexRational> p);

/// Coefficients of prod_i (z + r_i); entry k is e_{m-k}(r) for m roots.
ExactPoly from_shifted_roots(std::span<const ComplexRational> shifts);

}  // namespace poly
}  // namespace hypzero
