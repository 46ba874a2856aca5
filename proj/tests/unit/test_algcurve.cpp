#include <doctest.h>

#include <random>

#include "hypzero/curve.hpp"
#include "hypzero/errors.hpp"
#include "hypzero/roots.hpp"
#include "test_support.hpp"

using namespace hypzero;
using hypzero::testing::cr;
using hypzero::testing::random_rational;

namespace {

// (zw - 1)(zw + k) - w (zw + k) written out term by term.
ComplexRational lemniscate_curve(const ComplexRational& k, const ComplexRational& z, const ComplexRational& w) {
  return (z * w - cr(1)) * (z * w + k) - w * (z * w + k);
}

ParameterSchedule degenerate3(const ComplexRational& a2, const ComplexRational& a3) {
  ParameterSchedule s;
  s.alphas = {cr(-1), a2, a3};
  s.cs = {cr(0), cr(0), cr(0)};
  s.betas = {a2, a3};
  s.ds = {cr(0), cr(0)};
  return s;
}

Real dist(const BigComplex& a, const BigComplex& b) { return (a - b).abs(); }

}  // namespace

TEST_CASE("expansion of the two-branch curve") {
  std::mt19937_64 rng(11);
  for (long k : {1L, 2L, 7L}) {
    const auto curve = build_curve(ParameterSchedule::lemniscate_family(cr(k)));
    CHECK(curve.w_degree() == 2);
    for (int t = 0; t < 10; ++t) {
      const auto z = random_rational(rng);
      const auto w = random_rational(rng);
      CHECK(curve.evaluate(z, w) == lemniscate_curve(cr(k), z, w));
      CHECK(curve.evaluate(z, w) == curve.evaluate_structured(z, w));
    }
  }
}

TEST_CASE("single-branch curve is w(z-1) - 1") {
  ParameterSchedule s;
  s.alphas = {cr(-1)};
  s.cs = {cr(0)};
  const auto curve = build_curve(s);
  CHECK(curve.export_terms() == "0 0 -1/1 0/1\n0 1 -1/1 0/1\n1 1 1/1 0/1\n");
  const auto bp = branch_points(curve, s);
  CHECK(bp.points.empty());
  const auto w = branches_at(curve, BigComplex(cr(3), 128), 128);
  REQUIRE(w.size() == 1);
  CHECK(dist(w[0], BigComplex(ComplexRational(Rational(1, 2)), 128)) < Real::pow2(-120, 64));
}

TEST_CASE("expanded and structured forms agree on random schedules") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ParameterSchedule s;
    const int b = 1 + trial % 3;
    s.alphas = {cr(-1)};
    s.cs = {cr(0)};
    for (int i = 0; i < b; ++i) {
      ComplexRational a = random_rational(rng);
      if (a.is_zero()) a = cr(1);
      s.alphas.push_back(a);
      s.cs.push_back(cr(0));
      s.betas.push_back(random_rational(rng));
      s.ds.push_back(cr(0));
    }
    const auto curve = build_curve(s);
    for (int t = 0; t < 5; ++t) {
      const auto z = random_rational(rng);
      const auto w = random_rational(rng);
      CHECK(curve.evaluate(z, w) == curve.evaluate_structured(z, w));
    }
    // leading w-coefficient is z^B (z - 1) up to sign
    ExactPoly lead(static_cast<std::size_t>(b) + 2, cr(0));
    lead[static_cast<std::size_t>(b)] = cr(-1);
    lead[static_cast<std::size_t>(b) + 1] = cr(1);
    const auto lc = curve.w_coefficient(curve.w_degree());
    CHECK((lc == lead || lc == poly::scale(lead, cr(-1))));
  }
}

TEST_CASE("build_curve rejects alpha = 0") {
  ParameterSchedule s = ParameterSchedule::lemniscate_family(cr(0));
  CHECK_THROWS_AS(build_curve(s), Error);
}

TEST_CASE("branches of the k = 1 curve") {
  const auto s = ParameterSchedule::lemniscate_family(cr(1));
  const auto curve = build_curve(s);
  const int prec = 256;

  const auto at2 = branches_at(curve, BigComplex(cr(2), prec), prec);
  REQUIRE(at2.size() == 2);
  CHECK(dist(at2[0], BigComplex(ComplexRational(Rational(-1, 2)), prec)) < Real::pow2(-250, 64));
  CHECK(dist(at2[1], BigComplex(cr(1), prec)) < Real::pow2(-250, 64));

  // double root at the branch point: both copies close to -2
  const auto at_half = branches_at(curve, BigComplex(ComplexRational(Rational(1, 2)), prec), prec);
  REQUIRE(at_half.size() == 2);
  for (const auto& w : at_half) CHECK(dist(w, BigComplex(cr(-2), prec)) < Real::pow2(-100, 64));

  CHECK_THROWS_AS(branches_at(curve, BigComplex(cr(0), prec), prec), Error);
  CHECK_THROWS_AS(branches_at(curve, BigComplex(cr(1), prec), prec), Error);

  const auto bp = branch_points(curve, s);
  CHECK(bp.degenerate);
  REQUIRE(bp.exact_points.size() == 1);
  CHECK(bp.exact_points[0] == ComplexRational(Rational(1, 2)));
  CHECK(bp.cross_check_distance < 1e-60);
}

TEST_CASE("degenerate branches match the closed forms") {
  std::mt19937_64 rng(9);
  const int prec = 192;
  for (int trial = 0; trial < 10; ++trial) {
    ComplexRational a2 = random_rational(rng), a3 = random_rational(rng);
    if (a2.is_zero()) a2 = cr(2);
    if (a3.is_zero() || a3 == a2) a3 = a2 + cr(0, 1);
    const auto curve = build_curve(degenerate3(a2, a3));
    const ComplexRational z = random_rational(rng) + cr(3, 1);
    std::vector<BigComplex> expect{BigComplex(cr(1) / (z - cr(1)), prec), BigComplex(-a2 / z, prec),
                                   BigComplex(-a3 / z, prec)};
    const auto got = branches_at(curve, BigComplex(z, prec), prec);
    REQUIRE(got.size() == 3);
    for (const auto& e : expect) {
      Real best = dist(got[0], e);
      for (const auto& g : got) best = min(best, dist(g, e));
      CHECK(best < Real::pow2(-180, 64));
    }
    // every branch solves A(z, .) relative to coefficient scale
    const auto coeffs = curve.w_polynomial_at(BigComplex(z, prec));
    for (const auto& g : got) CHECK(relative_residual(coeffs, g) < Real::pow2(-prec / 2, 64));
  }
}

TEST_CASE("branch point of alpha = 1/2 - i") {
  const auto a = cr(1, 2, -1, 1);
  const auto s = ParameterSchedule::lemniscate_family(a);
  const auto bp = branch_points(build_curve(s), s);
  REQUIRE(bp.exact_points.size() == 1);
  const ComplexRational want = cr(1, 2, -1, 1) / cr(3, 2, -1, 1);
  CHECK(bp.exact_points[0] == want);
  CHECK(want == cr(7, 13, -4, 13));
  CHECK(bp.cross_check_distance < 1e-60);
}

TEST_CASE("discriminant of the two-branch family is ((k+1)z - k)^2 up to a constant") {
  for (long k : {1L, 3L}) {
    const auto curve = build_curve(ParameterSchedule::lemniscate_family(cr(k)));
    const auto disc = w_discriminant(curve);
    REQUIRE(poly::degree(disc) == 2);
    const ExactPoly lin{cr(-k), cr(k + 1)};
    const auto sq = poly::mul(lin, lin);
    const auto ratio = disc.back() / sq.back();
    CHECK(disc == poly::scale(sq, ratio));
  }
}

TEST_CASE("general-type discriminant zeros are genuine branch points") {
  ParameterSchedule s;
  s.alphas = {cr(-1), cr(0, 1), cr(1, 2)};
  s.cs = {cr(0), cr(0), cr(0)};
  s.betas = {cr(2), cr(-3, 1)};
  s.ds = {cr(0), cr(0)};
  const auto curve = build_curve(s);
  const auto bp = branch_points(curve, s, 256);
  CHECK_FALSE(bp.degenerate);
  CHECK_FALSE(bp.points.empty());
  for (const auto& p : bp.points) {
    // two of the three branches coalesce
    const auto w = branches_at(curve, p, 256);
    Real gap = dist(w[0], w[1]);
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j < w.size(); ++j) gap = min(gap, dist(w[i], w[j]));
    CHECK(gap < Real(1e-20, 64));
  }
}

TEST_CASE("non-reduced curve is reported") {
  ParameterSchedule s;
  s.alphas = {cr(-1), cr(2), cr(2)};
  s.cs = {cr(0), cr(0), cr(0)};
  s.betas = {cr(2), cr(2)};
  s.ds = {cr(0), cr(0)};
  const auto curve = build_curve(s);
  CHECK_THROWS_AS(branch_points(curve, s), Error);
}

TEST_CASE("rational branches solve the degenerate curve exactly") {
  for (long k : {1L, 2L, 5L}) {
    const auto r = verify_prop3(ParameterSchedule::lemniscate_family(cr(k)));
    CHECK(r.all_vanish);
    CHECK(r.branches.size() == 2);
  }
  const auto r3 = verify_prop3(degenerate3(cr(0, 1), cr(1, 2)));
  CHECK(r3.all_vanish);
  REQUIRE(r3.branches.size() == 3);
  CHECK(r3.branches[2].label == "w = -alpha_3/z");

  ParameterSchedule bad = ParameterSchedule::lemniscate_family(cr(2));
  bad.betas = {cr(3)};
  CHECK_THROWS_AS(verify_prop3(bad), Error);
}
