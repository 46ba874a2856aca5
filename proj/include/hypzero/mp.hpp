#pragma once

#include <mpfr.h>

#include <complex>
#include <string>

#include "hypzero/rational.hpp"

namespace hypzero {

/// Owning MPFR value with an explicit precision. Binary results take the larger operand
/// precision; all rounding is to nearest.
class Real {
 public:
  explicit Real(int precision_bits = 64);
  Real(double v, int precision_bits);
  Real(long v, int precision_bits);
  /// Correctly rounded from an exact rational.
  Real(const Rational& q, int precision_bits);

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  /// Rounds in place to a new precision.
  void set_precision(int precision_bits);

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  Real operator-() const;

  friend int compare(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const Real& a, const Real& b) { return compare(a, b) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return compare(a, b) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Exact value as a rational (MPFR numbers are dyadic).
  Rational to_rational() const;
  /// base-2 exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent() const;

  /// Scientific notation with the given number of significant decimal digits.
  std::string to_string(int digits) const;
  /// Digits needed to faithfully represent this precision.
  static int decimal_digits(int precision_bits);

  /// 2^e at the given precision.
  static Real pow2(long e, int precision_bits);
  static Real parse(const std::string& text, int precision_bits);

  friend Real abs(const Real& a);
  friend Real sqrt(const Real& a);
  friend Real log(const Real& a);
  friend Real atan2(const Real& y, const Real& x);
  friend Real max(const Real& a, const Real& b) { return a < b ? b : a; }
  friend Real min(const Real& a, const Real& b) { return b < a ? b : a; }

 private:
  mpfr_t v_;
};

/// Complex number over Real components.
struct BigComplex {
  Real re;
  Real im;

  explicit BigComplex(int precision_bits = 64) : re(precision_bits), im(precision_bits) {}
  BigComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  BigComplex(std::complex<double> z, int precision_bits) : re(z.real(), precision_bits), im(z.imag(), precision_bits) {}
  BigComplex(const ComplexRational& q, int precision_bits) : re(q.re(), precision_bits), im(q.im(), precision_bits) {}

  int precision() const { return re.precision(); }
  void set_precision(int bits) {
    re.set_precision(bits);
    im.set_precision(bits);
  }

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
  BigComplex operator-() const { return {-re, -im}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  /// |z|^2
  Real norm() const;
  Real abs() const;
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  ComplexRational to_exact() const { return {re.to_rational(), im.to_rational()}; }
};

/// Lexicographic (re, im) order.
bool lex_less(const BigComplex& a, const BigComplex& b);

}  // namespace hypzero
