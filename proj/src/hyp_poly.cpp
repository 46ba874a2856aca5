#include "hypzero/hyp_poly.hpp"

#include "hypzero/errors.hpp"

namespace hypzero {

ComplexRational pochhammer(const ComplexRational& a, unsigned k) {
  ComplexRational r(1);
  ComplexRational term = a;
  for (unsigned i = 0; i < k; ++i) {
    r *= term;
    if (r.is_zero()) break;
    term += ComplexRational(1);
  }
  return r;
}

HypPolynomial build_polynomial(const ParameterSchedule& schedule, unsigned n) {
  schedule.validate();
  std::vector<ComplexRational> a;
  std::vector<ComplexRational> b;
  for (std::size_t i = 0; i < schedule.numerator_count(); ++i) a.push_back(schedule.numerator_at(i, n));
  for (std::size_t j = 0; j < schedule.denominator_count(); ++j) {
    b.push_back(schedule.denominator_at(j, n));
    if (b.back().is_nonpositive_integer()) {
      throw invalid_input("denominator parameter b_" + std::to_string(j + 1) + "(" + std::to_string(n) +
                          ") = " + b.back().to_string() + " is a nonpositive integer");
    }
  }

  HypPolynomial p;
  p.schedule = schedule;
  p.n = n;
  p.coeffs.reserve(n + 1);
  p.coeffs.emplace_back(1);
  for (unsigned k = 0; k < n; ++k) {
    const ComplexRational kk(static_cast<long>(k));
    ComplexRational num(1);
    for (const auto& ai : a) num *= ai + kk;
    if (num.is_zero()) break;
    ComplexRational den(static_cast<long>(k + 1));
    for (const auto& bj : b) den *= bj + kk;
    p.coeffs.push_back(p.coeffs.back() * num / den);
  }
  if (p.degree() < static_cast<int>(n)) {
    p.warning = "series truncates early: degree " + std::to_string(p.degree()) + " instead of " + std::to_string(n) +
                " (a numerator parameter is a negative integer above -n)";
  }
  return p;
}

HypPolynomial apply_hypergeometric_operator(const HypPolynomial& p) {
  const auto& s = p.schedule;
  const ComplexRational one(1);

  // First term: shift-down of D prod_j (D + b_j - 1) p.
  ExactPoly first = p.coeffs;
  for (std::size_t j = 0; j < s.denominator_count(); ++j) {
    const ComplexRational shift = s.denominator_at(j, p.n) - one;
    for (std::size_t k = 0; k < first.size(); ++k) first[k] *= ComplexRational(static_cast<long>(k)) + shift;
  }
  for (std::size_t k = 0; k < first.size(); ++k) first[k] *= ComplexRational(static_cast<long>(k));
  // The D factor annihilates the constant term, so dividing by z is exact.
  if (!first.empty()) first.erase(first.begin());

  ExactPoly second = p.coeffs;
  for (std::size_t i = 0; i < s.numerator_count(); ++i) {
    const ComplexRational shift = s.numerator_at(i, p.n);
    for (std::size_t k = 0; k < second.size(); ++k) second[k] *= ComplexRational(static_cast<long>(k)) + shift;
  }

  HypPolynomial out;
  out.schedule = s;
  out.n = p.n;
  out.coeffs = poly::sub(first, second);
  return out;
}

std::vector<ComplexRational> characteristic_roots(const ParameterSchedule& schedule) {
  std::vector<ComplexRational> roots;
  for (std::size_t i = 0; i < schedule.alphas.size(); ++i) {
    if (schedule.alphas[i].is_zero()) {
      throw invalid_input("degenerate pencil: alpha_" + std::to_string(i + 1) + " = 0");
    }
    roots.push_back(-ComplexRational(1) / schedule.alphas[i]);
  }
  return roots;
}

GeneralTypeCheck is_general_type(const ParameterSchedule& schedule) {
  const auto& al = schedule.alphas;
  for (std::size_t i = 1; i < al.size(); ++i) {
    for (std::size_t j = i + 1; j < al.size(); ++j) {
      if (al[i] == al[j]) {
        return {false, "repeated root: alpha_" + std::to_string(i + 1) + " = alpha_" + std::to_string(j + 1) + " = " +
                           al[i].to_string()};
      }
    }
    if (al[i] == ComplexRational(-1)) {
      return {false, "repeated root: alpha_" + std::to_string(i + 1) + " = -1 = alpha_1"};
    }
    const ComplexRational neg = -al[i];
    if (neg.is_real() && neg.re() <= 1) {
      return {false, "-alpha_" + std::to_string(i + 1) + " = " + rational_to_string(neg.re()) + " lies in (-inf, 1]"};
    }
  }
  return {true, "general type"};
}

std::string export_polynomial(const HypPolynomial& p) {
  std::string out;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    out += std::to_string(k) + " " + rational_to_string(p.coeffs[k].re()) + " " +
           rational_to_string(p.coeffs[k].im()) + "\n";
  }
  return out;
}

}  // namespace hypzero
