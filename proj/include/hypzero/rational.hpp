#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace hypzero {

using Rational = mpq_class;

/// Exact Gaussian rational re + im*i. Every operation is exact; division by zero throws.
class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(Rational re, Rational im = 0);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  /// True when the value is a real integer <= 0.
  bool is_nonpositive_integer() const;

  ComplexRational conj() const { return {re_, -im_}; }
  /// re^2 + im^2
  Rational norm() const { return re_ * re_ + im_ * im_; }

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);
  ComplexRational& operator/=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  ComplexRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// Canonical "p/q+r/s*i" form; denominators always written, sign carried by the numerator.
  std::string to_string() const;

  /// Accepts the canonical form plus the usual shorthands: "3", "-1/2", "i", "2-i", "1/2-1*i", "3/4*i".
  static ComplexRational parse(std::string_view text);

 private:
  Rational re_{0};
  Rational im_{0};
};

/// "p/q" with q written even when it is 1.
std::string rational_to_string(const Rational& q);

/// Exact conversion of a finite double (every double is a dyadic rational).
ComplexRational exact_from(std::complex<double> z);

}  // namespace hypzero
