// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "hypzero/curve.hpp"
#include "hypzero/errors.hpp"
#include "hypzero/experiments.hpp"
#include "hypzero/hyp_poly.hpp"
#include "hypzero/potential.hpp"
#include "hypzero/roots.hpp"

using namespace hypzero;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ComplexRational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

ParameterSchedule random_schedule(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bcount(1, 2);
  ParameterSchedule s;
  const int b = bcount(rng);
  s.alphas = {ComplexRational(-1)};
  s.cs = {ComplexRational(0)};
  for (int i = 0; i < b; ++i) {
    s.alphas.push_back(small_rational(rng));
    s.cs.push_back(small_rational(rng));
    s.betas.push_back(small_rational(rng));
    s.ds.push_back(small_rational(rng));
  }
  return s;
}

// Rising factorial written out independently of the library.
ComplexRational rising(const ComplexRational& a, unsigned k) {
  ComplexRational r(1);
  for (unsigned i = 0; i < k; ++i) r = r * (a + ComplexRational(static_cast<long>(i)));
  return r;
}

// Term-by-term series coefficient prod (a_i)_k / (prod (b_j)_k k!).
ComplexRational series_coefficient(const ParameterSchedule& s, unsigned n, unsigned k) {
  ComplexRational num(1), den(1);
  for (std::size_t i = 0; i < s.numerator_count(); ++i) num = num * rising(s.numerator_at(i, n), k);
  for (std::size_t j = 0; j < s.denominator_count(); ++j) den = den * rising(s.denominator_at(j, n), k);
  den = den * rising(ComplexRational(1), k);
  return num / den;
}

RootCountingMeasure strict_roots(const HypPolynomial& p, int bits) {
  RootOptions o;
  o.precision_bits = bits;
  o.auto_refine = false;
  return find_roots(p, o);
}

std::vector<Point> right_loop(const ParameterSchedule& s, double step) {
  const auto sys = make_harmonic_system(s);
  TraceOptions opts;
  opts.step = step;
  const auto curve = trace_level_curve(sys, {2, 1}, seed_on_ray(sys, {2, 1}, 1.0, 1.0, 10.0), opts);
  if (!curve.closed) throw std::runtime_error("level curve did not close");
  return curve.points;
}

bool write_and_compare(const std::filesystem::path& dir, const std::string& name, const std::string& a,
                       const std::string& b) {
  std::filesystem::create_directories(dir / "run1");
  std::filesystem::create_directories(dir / "run2");
  std::ofstream(dir / "run1" / name, std::ios::binary) << a;
  std::ofstream(dir / "run2" / name, std::ios::binary) << b;
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  return !a.empty() && slurp(dir / "run1" / name) == slurp(dir / "run2" / name);
}

}  // namespace

int main() {
  const ComplexRational one(1);
  const auto lemniscate1 = ParameterSchedule::lemniscate_family(one);

  run(1, [&] {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<unsigned> degree(0, 20);
    int checked = 0, attempts = 0;
    while (checked < 20 && attempts < 1000) {
      ++attempts;
      const auto s = random_schedule(rng);
      const unsigned n = degree(rng);
      HypPolynomial p;
      try {
        p = build_polynomial(s, n);
      } catch (const Error&) {
        continue;
      }
      if (!apply_hypergeometric_operator(p).coeffs.empty())
        return Outcome{false, "operator residual nonzero for schedule " + s.hash() + " n=" + std::to_string(n)};
      ++checked;
    }
    return Outcome{checked == 20, std::to_string(checked) + " random schedules (n <= 20), operator image exactly zero"};
  });

  run(2, [&] {
    const auto p = build_polynomial(ParameterSchedule::shifted_family({ComplexRational(1)}), 2);
    const ExactPoly want{ComplexRational(1), ComplexRational(Rational(-4, 3)), ComplexRational(Rational(1, 2))};
    if (p.coeffs != want) return Outcome{false, "2F1(-2,2;3) coefficients differ"};
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<unsigned> degree(1, 8);
    int agreed = 0;
    while (agreed < 10) {
      const auto s = random_schedule(rng);
      const unsigned n = degree(rng);
      HypPolynomial q;
      try {
        q = build_polynomial(s, n);
      } catch (const Error&) {
        continue;
      }
      for (unsigned k = 0; k <= n; ++k) {
        const ComplexRational c = k < q.coeffs.size() ? q.coeffs[k] : ComplexRational(0);
        if (c != series_coefficient(s, n, k)) return Outcome{false, "series oracle mismatch at k=" + std::to_string(k)};
      }
      ++agreed;
    }
    return Outcome{true, "2F1(-2,2;3) = (1, -4/3, 1/2) exactly; 10 random cases match the term-by-term oracle"};
  });

  std::vector<RootCountingMeasure> k1_measures;
  run(3, [&] {
    const Real bound = Real::pow2(-128, 64);
    std::string detail;
    bool ok = true;
    for (unsigned n : {25u, 50u, 100u}) {
      const auto p = build_polynomial(lemniscate1, n);
      auto m = strict_roots(p, 512);
      Real worst(0L, 64);
      for (const auto& r : m.residual_bounds) worst = max(worst, r);
      const auto v = vieta_check(p, m);
      ok = ok && worst < bound && v.sum_deviation < bound && v.product_deviation < bound && m.precision_bits == 512;
      detail += "n=" + std::to_string(n) + " residual 2^" + std::to_string(worst.is_zero() ? -99999 : worst.exponent()) +
                " vieta 2^" + std::to_string(v.max_deviation.is_zero() ? -99999 : v.max_deviation.exponent()) + "; ";
      k1_measures.push_back(std::move(m));
    }
    return Outcome{ok, detail + "bound 2^-128 at 512 bits"};
  });

  run(4, [&] {
    const auto p = build_polynomial(lemniscate1, 50);
    const auto m = find_roots(p, 512);
    const ExactPoly dp = poly::derivative(p.coeffs);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ux(-1.0, 3.0), uy(-2.0, 2.0);
    const int prec = m.precision_bits;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const ComplexRational z = exact_from({ux(rng), uy(rng)});
      const ComplexRational exact = poly::evaluate(dp, z) / (ComplexRational(50) * poly::evaluate(p.coeffs, z));
      const BigComplex diff = cauchy_transform_at(m, BigComplex(z, prec)) - BigComplex(exact, prec);
      worst = std::max(worst, diff.abs().to_double());
    }
    return Outcome{worst < 1e-20, "n=50, 100 random z, max |C - p'/(np)| = " + fmt(worst) + " (< 1e-20)"};
  });

  run(5, [&] {
    std::vector<ParameterSchedule> cases = {ParameterSchedule::lemniscate_family(ComplexRational(1)),
                                            ParameterSchedule::lemniscate_family(ComplexRational(2)),
                                            ParameterSchedule::lemniscate_family(ComplexRational(Rational(1, 2), -1)),
                                            ParameterSchedule::shifted_family({ComplexRational(0, 1), ComplexRational(1, 2)}),
                                            ParameterSchedule::shifted_family({ComplexRational(1, -5), ComplexRational(7, 1)})};
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
      ComplexRational a = small_rational(rng), b = small_rational(rng);
      if (a.is_zero()) a = ComplexRational(3);
      if (b.is_zero()) b = ComplexRational(0, 2);
      cases.push_back(ParameterSchedule::shifted_family({a, b}));
    }
    std::size_t branches = 0;
    for (const auto& s : cases) {
      const auto r = verify_prop3(s);
      if (!r.all_vanish) return Outcome{false, "nonzero substitution residual for schedule " + s.hash()};
      branches += r.branches.size();
    }
    return Outcome{true, std::to_string(cases.size()) + " degenerate schedules (A = 2, 3), " + std::to_string(branches) +
                             " rational branches vanish exactly"};
  });

  run(6, [&] {
    const int prec = 256;
    std::string detail;
    bool ok = true;
    for (long k : {1L, 2L}) {
      const auto s = ParameterSchedule::lemniscate_family(ComplexRational(k));
      const auto bp = branch_points(build_curve(s), s, prec);
      const ComplexRational want(Rational(k, k + 1));
      ok = ok && bp.exact_points.size() == 1 && bp.exact_points[0] == want && bp.discriminant_roots.size() == 1;
      const double gap = (bp.discriminant_roots.at(0) - BigComplex(want, prec)).abs().to_double();
      ok = ok && gap < std::ldexp(1.0, -(prec - 8));
      detail += "k=" + std::to_string(k) + " p=" + want.to_string() + " |p - disc root| = " + fmt(gap) + "; ";
    }
    // |p^k (1 - p)| at p = 1/2 and k^k / (k+1)^(k+1) at k = 1
    const ComplexRational p(Rational(1, 2));
    const ComplexRational at_p = p * (ComplexRational(1) - p);
    ok = ok && at_p == ComplexRational(Rational(1, 4));
    return Outcome{ok, detail + "k=1 lemniscate constant |p(1-p)| = " + at_p.to_string()};
  });

  run(7, [&] {
    const auto sys = make_harmonic_system(lemniscate1);
    TraceOptions opts;
    opts.step = 2e-3;
    const auto curve = trace_level_curve(sys, {2, 1}, seed_on_ray(sys, {2, 1}, 1.0, 1.0), opts);
    double worst = 0.0;
    for (const auto& z : curve.points) worst = std::max(worst, std::abs(std::abs(z * (1.0 - z)) - 0.25));
    bool saddle = false;
    for (const auto& c : curve.critical_points) saddle = saddle || std::abs(c.z - 0.5) < 1e-12;
    const auto at = trace_level_curve(sys, {2, 1}, 0.5, opts);
    const bool split = at.critical_points.size() == 1 && at.stop_reasons.front() == "critical";
    return Outcome{worst < 1e-10 && curve.closed && saddle && split,
                   std::to_string(curve.points.size()) + " points, max ||z(1-z)| - 1/4| = " + fmt(worst) +
                       (curve.closed ? ", closed" : ", open") + (saddle ? ", saddle at 1/2 detected" : ", no saddle") +
                       (split ? ", seed at 1/2 reports the split" : "")};
  });

  std::vector<std::string> distance_json;
  run(8, [&] {
    if (k1_measures.size() != 3) return Outcome{false, "criterion 3 roots unavailable"};
    const auto loop = right_loop(lemniscate1, 2e-3);
    std::vector<double> d;
    for (const auto& m : k1_measures) {
      const auto r = zero_curve_distance(m, loop, Restriction::right_of(0.5));
      d.push_back(r.max);
      distance_json.push_back(r.to_json());
    }
    const bool ok = d[1] < d[0] && d[2] < d[1] && d[2] <= 0.5 * d[0];
    return Outcome{ok, "max distance (Re z > 1/2) n=25,50,100: " + fmt(d[0]) + ", " + fmt(d[1]) + ", " + fmt(d[2]) +
                           "; ratio " + fmt(d[2] / d[0]) + " (<= 0.5)"};
  });

  run(9, [&] {
    std::string detail;
    bool ok = true;
    for (const auto& a : {ComplexRational(Rational(1, 2), -1), ComplexRational(2, 1)}) {
      const auto s = ParameterSchedule::lemniscate_family(a);
      const auto loop = right_loop(s, 2e-3);
      const double eta = a.re().get_d();
      std::vector<double> d;
      for (unsigned n : {10u, 50u, 100u}) {
        const auto m = find_roots(build_polynomial(s, n));
        d.push_back(zero_curve_distance(m, loop, Restriction::right_of(eta / (eta + 1))).max);
      }
      ok = ok && d[1] < d[0] && d[2] < d[1];
      detail += "alpha=" + a.to_string() + ": " + fmt(d[0]) + ", " + fmt(d[1]) + ", " + fmt(d[2]) + "; ";
    }
    return Outcome{ok, detail + "max restricted distance along n=10,50,100"};
  });

  run(10, [&] {
    if (k1_measures.size() != 3) return Outcome{false, "criterion 3 roots unavailable"};
    const auto loop = right_loop(lemniscate1, 2e-3);
    const Point outside(2.0, 0.0), inside(1.1, 0.0);
    const auto report = cauchy_convergence(lemniscate1, k1_measures,
                                           {{outside, side_of(outside, loop)}, {inside, side_of(inside, loop)}});
    const auto& o = report.points[0];
    const auto& i = report.points[1];
    const bool ok = o.side == Side::Outside && i.side == Side::Inside && o.monotone && i.monotone;
    return Outcome{ok, "|C(2) - 1|: " + fmt(o.deviations[0]) + ", " + fmt(o.deviations[1]) + ", " + fmt(o.deviations[2]) +
                           "; |C(1.1) + 1/1.1|: " + fmt(i.deviations[0]) + ", " + fmt(i.deviations[1]) + ", " +
                           fmt(i.deviations[2])};
  });

  run(11, [&] {
    const auto s = ParameterSchedule::shifted_family({ComplexRational(0, 1), ComplexRational(1, 2)});
    const auto roots = find_roots(build_polynomial(s, 100)).as_complex();
    const auto grid = classify_regions(make_harmonic_system(s), cloud_box(roots), 400);
    const auto score = conjecture2_score(roots, grid);
    const auto null = uniform_null_score(grid, score.epsilon, 20000, 11);
    const double ratio = score.near_k / null.fraction;
    return Outcome{ratio >= 5.0, "fraction near K " + fmt(score.near_k) + " vs uniform null " + fmt(null.fraction) +
                                     " (sigma " + fmt(null.sigma) + "), ratio " + fmt(ratio) + " (>= 5)"};
  });

  run(12, [&] {
    const std::filesystem::path dir = std::filesystem::current_path() / "acceptance_determinism";
    bool ok = true;
    for (unsigned n : {25u, 50u, 100u}) {
      const auto p = build_polynomial(lemniscate1, n);
      const std::string hash = p.schedule.hash();
      ok = ok && write_and_compare(dir, "roots_n" + std::to_string(n) + ".txt", export_roots(strict_roots(p, 512), hash),
                                   export_roots(strict_roots(p, 512), hash));
    }
    const auto sys = make_harmonic_system(lemniscate1);
    TraceOptions opts;
    opts.step = 2e-3;
    const Point seed = seed_on_ray(sys, {2, 1}, 1.0, 1.0);
    ok = ok && write_and_compare(dir, "lemniscate.csv", export_level_curve(trace_level_curve(sys, {2, 1}, seed, opts)),
                                 export_level_curve(trace_level_curve(sys, {2, 1}, seed, opts)));
    const auto loop = right_loop(lemniscate1, 2e-3);
    for (std::size_t k = 0; k < distance_json.size(); ++k) {
      const auto again = zero_curve_distance(strict_roots(build_polynomial(lemniscate1, k1_measures[k].size()), 512), loop,
                                             Restriction::right_of(0.5));
      ok = ok && write_and_compare(dir, "distance_" + std::to_string(k) + ".json", distance_json[k], again.to_json());
    }
    ok = ok && distance_json.size() == 3;
    return Outcome{ok, "root files, level curve and distance reports byte-identical across two runs (" + dir.string() + ")"};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
