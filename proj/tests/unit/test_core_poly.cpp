#include <doctest.h>

#include "hypzero/errors.hpp"
#include "hypzero/hyp_poly.hpp"
#include "test_support.hpp"

using namespace hypzero;
using hypzero::testing::brute_rising;
using hypzero::testing::cr;

namespace {

// Term-by-term series coefficient computed directly from the definition.
ComplexRational series_term(const std::vector<ComplexRational>& a, const std::vector<ComplexRational>& b, unsigned k) {
  ComplexRational num(1);
  for (const auto& x : a) num *= brute_rising(x, k);
  ComplexRational den = brute_rising(cr(1), k);  // k!
  for (const auto& x : b) den *= brute_rising(x, k);
  return num / den;
}

ParameterSchedule random_schedule(std::mt19937_64& rng, std::size_t a_count) {
  ParameterSchedule s;
  s.alphas = {cr(-1)};
  s.cs = {cr(0)};
  for (std::size_t i = 1; i < a_count; ++i) {
    s.alphas.push_back(hypzero::testing::random_rational(rng));
    s.cs.push_back(hypzero::testing::random_rational(rng));
    s.betas.push_back(hypzero::testing::random_rational(rng));
    s.ds.push_back(hypzero::testing::random_rational(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("complex rational parse and print") {
  CHECK(ComplexRational::parse("1/2-1/1*i") == cr(1, 2, -1, 1));
  CHECK(ComplexRational::parse("2+i") == cr(2, 1));
  CHECK(ComplexRational::parse("-i") == cr(0, -1));
  CHECK(ComplexRational::parse("3/4*i") == cr(0, 1, 3, 4));
  CHECK(ComplexRational::parse("-7") == cr(-7));
  CHECK(ComplexRational::parse("1+2i") == cr(1, 2));
  CHECK(ComplexRational::parse("-2/4") == cr(-1, 2, 0, 1));
  CHECK(cr(1, 2, -1, 1).to_string() == "1/2-1/1*i");
  CHECK(cr(-3).to_string() == "-3/1+0/1*i");
  CHECK_THROWS_AS(ComplexRational::parse("1/0"), Error);
  CHECK_THROWS_AS(ComplexRational::parse("0.5"), Error);
  CHECK_THROWS_AS(ComplexRational::parse(""), Error);
  CHECK_THROWS_AS(cr(1) / cr(0), Error);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto q = hypzero::testing::random_rational(rng, 1000, 97);
    CHECK(ComplexRational::parse(q.to_string()) == q);
  }
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(cr(3), 2) == cr(12));
  CHECK(pochhammer(cr(5, 2, 1, 3), 0) == cr(1));
  CHECK(pochhammer(cr(-2), 3) == cr(0));
}

TEST_CASE("schedule validation and serialization") {
  auto s = ParameterSchedule::lemniscate_family(cr(1, 2, -1, 1));
  CHECK_NOTHROW(s.validate());
  CHECK(s.is_degenerate());
  const auto back = ParameterSchedule::parse(s.serialize());
  CHECK(back.alphas == s.alphas);
  CHECK(back.ds == s.ds);
  CHECK(back.hash() == s.hash());

  auto bad = s;
  bad.alphas[0] = cr(-2);
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.betas.push_back(cr(1));
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(ParameterSchedule::parse("{\"alphas\": [\"-1\"]}"), Error);
  CHECK_THROWS_AS(ParameterSchedule::parse("not json"), Error);

  const auto shifted = ParameterSchedule::shifted_family({cr(0, 1), cr(1, 2)});
  CHECK(shifted.numerator_count() == 3);
  CHECK(shifted.is_degenerate());
  CHECK(shifted.denominator_at(1, 10) == cr(11, 20));
}

TEST_CASE("build_polynomial matches the series definition") {
  // 2F1(-2, 2; 3; z): a_2 = n, b_1 = n + 1 at n = 2.
  const auto s = ParameterSchedule::shifted_family({cr(1)});
  const auto p = build_polynomial(s, 2);
  REQUIRE(p.coeffs.size() == 3);
  CHECK(p.coeffs[0] == cr(1));
  CHECK(p.coeffs[1] == cr(-4, 3, 0, 1));
  CHECK(p.coeffs[2] == cr(1, 2, 0, 1));
  CHECK(export_polynomial(p) == "0 1/1 0/1\n1 -4/3 0/1\n2 1/2 0/1\n");

  SUBCASE("n = 1 gives 1 - (b/c) z") {
    ParameterSchedule t;
    t.alphas = {cr(-1), cr(2, 3, 1, 1)};
    t.cs = {cr(0), cr(1, 5, 0, 1)};
    t.betas = {cr(1, 2, -1, 1)};
    t.ds = {cr(3, 7, 0, 1)};
    const auto q = build_polynomial(t, 1);
    const ComplexRational b = t.numerator_at(1, 1);
    const ComplexRational c = t.denominator_at(0, 1);
    REQUIRE(q.coeffs.size() == 2);
    CHECK(q.coeffs[1] == -(b / c));
  }

  SUBCASE("n = 0 is the constant 1") {
    const auto q = build_polynomial(ParameterSchedule::lemniscate_family(cr(3)), 0);
    REQUIRE(q.coeffs.size() == 1);
    CHECK(q.coeffs[0] == cr(1));
    CHECK(export_polynomial(q) == "0 1/1 0/1\n");
  }

  SUBCASE("random schedules agree with the brute-force oracle and the term ratio") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    while (checked < 25) {
      const auto sched = random_schedule(rng, 2 + rng() % 3);
      const unsigned n = 1 + rng() % 12;
      std::vector<ComplexRational> a, b;
      bool ok = true;
      for (std::size_t i = 0; i < sched.numerator_count(); ++i) a.push_back(sched.numerator_at(i, n));
      for (std::size_t j = 0; j < sched.denominator_count(); ++j) {
        b.push_back(sched.denominator_at(j, n));
        ok = ok && !b.back().is_nonpositive_integer();
      }
      if (!ok) continue;
      const auto q = build_polynomial(sched, n);
      for (unsigned k = 0; k <= n; ++k) {
        const ComplexRational want = series_term(a, b, k);
        const ComplexRational got = k < q.coeffs.size() ? q.coeffs[k] : cr(0);
        CHECK(got == want);
      }
      for (unsigned k = 0; k + 1 < q.coeffs.size(); ++k) {
        ComplexRational num(1), den(static_cast<long>(k + 1));
        for (const auto& x : a) num *= x + cr(k);
        for (const auto& x : b) den *= x + cr(k);
        CHECK(q.coeffs[k + 1] / q.coeffs[k] == num / den);
      }
      ++checked;
    }
  }
}

TEST_CASE("build_polynomial rejects nonpositive integer denominators") {
  ParameterSchedule s;
  s.alphas = {cr(-1), cr(1)};
  s.cs = {cr(0), cr(0)};
  s.betas = {cr(-1)};
  s.ds = {cr(0)};
  // b_1(3) = -3 + 0 + 1 = -2
  try {
    build_polynomial(s, 3);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("b_1") != std::string::npos);
    CHECK(std::string(e.what()).find("-2/1") != std::string::npos);
  }
}

TEST_CASE("early truncation is reported with the true degree") {
  ParameterSchedule s;
  s.alphas = {cr(-1), cr(0)};
  s.cs = {cr(0), cr(-3)};  // a_2 = -3 for every n
  s.betas = {cr(1)};
  s.ds = {cr(0)};
  const auto p = build_polynomial(s, 8);
  CHECK(p.degree() == 3);
  CHECK(p.warning.has_value());
  CHECK(apply_hypergeometric_operator(p).coeffs.empty());
}

TEST_CASE("hypergeometric operator annihilates the polynomial exactly") {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 30) {
    const auto sched = random_schedule(rng, 2 + rng() % 3);
    const unsigned n = rng() % 21;
    try {
      const auto p = build_polynomial(sched, n);
      CHECK(apply_hypergeometric_operator(p).coeffs.empty());
      ++checked;
    } catch (const Error&) {
      // invalid denominator draw
    }
  }

  SUBCASE("1 + z is not a solution") {
    ParameterSchedule t;
    t.alphas = {cr(-1), cr(2, 3, 1, 1)};
    t.cs = {cr(0), cr(1)};
    t.betas = {cr(1, 3, 0, 1)};
    t.ds = {cr(1, 2, 1, 2)};
    HypPolynomial y;
    y.schedule = t;
    y.n = 4;
    y.coeffs = {cr(1), cr(1)};
    const ComplexRational a1 = t.numerator_at(0, 4), a2 = t.numerator_at(1, 4), b = t.denominator_at(0, 4);
    const auto r = apply_hypergeometric_operator(y);
    REQUIRE(r.coeffs.size() == 2);
    CHECK(r.coeffs[0] == b - a1 * a2);
    CHECK(r.coeffs[1] == -((cr(1) + a1) * (cr(1) + a2)));
  }
}

TEST_CASE("characteristic roots") {
  auto s = ParameterSchedule::lemniscate_family(cr(3));
  auto roots = characteristic_roots(s);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == cr(1));
  CHECK(roots[1] == cr(-1, 3, 0, 1));

  s = ParameterSchedule::shifted_family({cr(1, 2, -1, 1), cr(2, 1)});
  roots = characteristic_roots(s);
  REQUIRE(roots.size() == 3);
  CHECK(roots[1] == -cr(1) / cr(1, 2, -1, 1));
  CHECK(roots[2] == -cr(1) / cr(2, 1));
  for (const auto& lambda : roots) {
    ComplexRational prod(1);
    for (const auto& a : s.alphas) prod *= cr(1) + lambda * a;
    CHECK(prod.is_zero());
  }

  s.alphas[1] = cr(0);
  CHECK_THROWS_AS(characteristic_roots(s), Error);
}

TEST_CASE("general type") {
  auto g = is_general_type(ParameterSchedule::lemniscate_family(cr(1, 2, -1, 1)));
  CHECK(g.general);
  g = is_general_type(ParameterSchedule::shifted_family({cr(2, 1), cr(2, 1)}));
  CHECK_FALSE(g.general);
  CHECK(g.diagnostic.find("repeated root") != std::string::npos);
  g = is_general_type(ParameterSchedule::lemniscate_family(cr(-1, 2, 0, 1)));
  CHECK_FALSE(g.general);
  CHECK(g.diagnostic.find("1/2") != std::string::npos);
  CHECK(g.diagnostic.find("(-inf, 1]") != std::string::npos);
  CHECK_FALSE(is_general_type(ParameterSchedule::lemniscate_family(cr(-1))).general);
  CHECK(is_general_type(ParameterSchedule::lemniscate_family(cr(-2))).general);
}
