#include "hypzero/rational.hpp"

#include <cctype>
#include <cmath>

#include "hypzero/errors.hpp"

namespace hypzero {

ComplexRational::ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

bool ComplexRational::is_nonpositive_integer() const {
  return is_real() && re_.get_den() == 1 && sgn(re_) <= 0;
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  if (o.is_real()) {
    re_ *= o.re_;
    im_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
  if (o.is_zero()) throw Error(ErrorKind::Pole, "complex rational division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const Rational d = o.norm();
  Rational re = (re_ * o.re_ + im_ * o.im_) / d;
  Rational im = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string rational_to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string ComplexRational::to_string() const {
  std::string out = rational_to_string(re_);
  out += sgn(im_) < 0 ? "-" : "+";
  out += rational_to_string(abs(im_));
  out += "*i";
  return out;
}

namespace {

Rational parse_rational(std::string_view s, std::string_view whole) {
  if (s.empty()) throw invalid_input("empty rational in '" + std::string(whole) + "'");
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') ++i;
  bool digits = false;
  bool slash = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = true;
    } else if (s[i] == '/' && !slash && digits) {
      slash = true;
      digits = false;
    } else {
      throw invalid_input("malformed rational '" + std::string(s) + "' in '" + std::string(whole) + "'");
    }
  }
  if (!digits) throw invalid_input("malformed rational '" + std::string(s) + "' in '" + std::string(whole) + "'");
  std::string body(s[0] == '+' ? s.substr(1) : s);
  Rational q;
  try {
    q = Rational(body, 10);
  } catch (const std::invalid_argument&) {
    throw invalid_input("malformed rational '" + std::string(s) + "'");
  }
  if (q.get_den() == 0) throw invalid_input("zero denominator in '" + std::string(whole) + "'");
  q.canonicalize();
  return q;
}

// Imaginary coefficient text: "", "+", "-", "3", "-1/2", optionally followed by '*'.
Rational parse_imag(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.back() == '*') s.remove_suffix(1);
  if (s.empty() || s == "+") return 1;
  if (s == "-") return -1;
  return parse_rational(s, whole);
}

}  // namespace

ComplexRational ComplexRational::parse(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  std::string_view s = compact;
  if (s.empty()) throw invalid_input("empty complex rational");
  if (s.back() != 'i') return {parse_rational(s, text), 0};

  s.remove_suffix(1);
  // The split between real and imaginary parts is the last sign that is not leading.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if (s[i] == '+' || s[i] == '-') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return {0, parse_imag(s, text)};
  return {parse_rational(s.substr(0, split), text), parse_imag(s.substr(split), text)};
}

ComplexRational exact_from(std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw invalid_input("non-finite value");
  return {Rational(z.real()), Rational(z.imag())};
}

}  // namespace hypzero
