#include "hypzero/mp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypzero/errors.hpp"

namespace hypzero {

namespace {

mpfr_prec_t clamp_precision(int bits) {
  return static_cast<mpfr_prec_t>(std::max<int>(bits, MPFR_PREC_MIN));
}

mpfr_prec_t joint(const Real& a, const Real& b) {
  return static_cast<mpfr_prec_t>(std::max(a.precision(), b.precision()));
}

}  // namespace

Real::Real(int precision_bits) {
  mpfr_init2(v_, clamp_precision(precision_bits));
  mpfr_set_zero(v_, 1);
}

Real::Real(double v, int precision_bits) {
  mpfr_init2(v_, clamp_precision(precision_bits));
  mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(long v, int precision_bits) {
  mpfr_init2(v_, clamp_precision(precision_bits));
  mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(const Rational& q, int precision_bits) {
  mpfr_init2(v_, clamp_precision(precision_bits));
  mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  // Steal by swapping with a minimal fresh value.
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

void Real::set_precision(int precision_bits) { mpfr_prec_round(v_, clamp_precision(precision_bits), MPFR_RNDN); }

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r(static_cast<int>(joint(a, b)));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(static_cast<int>(joint(a, b)));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(static_cast<int>(joint(a, b)));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(static_cast<int>(joint(a, b)));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Rational Real::to_rational() const {
  if (!mpfr_number_p(v_)) throw invalid_input("non-finite multiprecision value");
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return q;
}

long Real::exponent() const {
  if (mpfr_zero_p(v_)) return std::numeric_limits<long>::min() / 2;
  return static_cast<long>(mpfr_get_exp(v_));
}

std::string Real::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

int Real::decimal_digits(int precision_bits) {
  return static_cast<int>(std::ceil(precision_bits * 0.30102999566398120)) + 1;
}

Real Real::pow2(long e, int precision_bits) {
  Real r(precision_bits);
  mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
  return r;
}

Real Real::parse(const std::string& text, int precision_bits) {
  Real r(precision_bits);
  if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0) {
    throw invalid_input("malformed number '" + text + "'");
  }
  return r;
}

Real abs(const Real& a) {
  Real r(a.precision());
  mpfr_abs(r.v_, a.v_, MPFR_RNDN);
  return r;
}

Real sqrt(const Real& a) {
  Real r(a.precision());
  mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
  return r;
}

Real log(const Real& a) {
  Real r(a.precision());
  mpfr_log(r.v_, a.v_, MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(static_cast<int>(joint(y, x)));
  mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
  return r;
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
  const Real d = o.norm();
  if (d.is_zero()) throw Error(ErrorKind::Pole, "complex division by zero");
  Real r = (re * o.re + im * o.im) / d;
  Real i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Real BigComplex::norm() const { return re * re + im * im; }

Real BigComplex::abs() const { return sqrt(norm()); }

bool lex_less(const BigComplex& a, const BigComplex& b) {
  const int c = compare(a.re, b.re);
  if (c != 0) return c < 0;
  return compare(a.im, b.im) < 0;
}

}  // namespace hypzero
