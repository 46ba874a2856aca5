#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hypzero/errors.hpp"
#include "hypzero/potential.hpp"
#include "test_support.hpp"

using namespace hypzero;
using hypzero::testing::cr;

namespace {

ParameterSchedule three_branch(const ComplexRational& a2, const ComplexRational& a3) {
  ParameterSchedule s;
  s.alphas = {cr(-1), a2, a3};
  s.cs = {cr(0), cr(0), cr(0)};
  s.betas = {a2, a3};
  s.ds = {cr(0), cr(0)};
  return s;
}

double polyline_distance(Point z, const std::vector<Point>& pts) {
  double best = std::abs(z - pts.front());
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const Point a = pts[k - 1], d = pts[k] - a;
    const double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    best = std::min(best, std::abs(z - (a + t * d)));
  }
  return best;
}

// Constant of the lemniscate |z^k (1 - z)| = k^k / (k+1)^(k+1).
double lemniscate_constant(double k) { return std::pow(k, k) / std::pow(k + 1, k + 1); }

}  // namespace

TEST_CASE("closed-form values and offsets") {
  const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1, 2, -1, 1)));
  CHECK(sys.mode == HarmonicMode::ClosedForm);
  const Point p = sys.branch_points[0];
  CHECK(std::abs(p - Point(7.0 / 13, -4.0 / 13)) < 1e-15);
  CHECK(std::abs(harmonic_value(sys, 1, p)) < 1e-15);
  CHECK(std::abs(shifted_value(sys, 2, p) - harmonic_value(sys, 1, p)) < 1e-15);

  // alpha = 1/2 - i at z = 2: Arg 2 = 0, so only the log term and the basepoint constant remain
  const double constant = 0.5 * std::log(std::abs(p)) + std::arg(p);
  CHECK(harmonic_value(sys, 2, 2.0) == doctest::Approx(-0.5 * std::log(2.0) + constant).epsilon(1e-14));

  CHECK_THROWS_AS(harmonic_value(sys, 1, 0.0), Error);
  CHECK_THROWS_AS(harmonic_value(sys, 2, 1.0), Error);
  CHECK_THROWS_AS(harmonic_value(sys, 3, 2.0), Error);

  const auto sys3 = make_harmonic_system(three_branch(cr(0, 1), cr(1, 1, 2, 1)));
  for (std::size_t i = 2; i <= 3; ++i) {
    const Point pi = sys3.branch_points[i - 2];
    CHECK(std::abs(shifted_value(sys3, i, pi) - harmonic_value(sys3, 1, pi)) < 1e-14);
  }
}

TEST_CASE("level function of the real family is the lemniscate") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (long k : {1L, 2L, 3L}) {
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(k)));
    const double kk = static_cast<double>(k);
    for (int t = 0; t < 50; ++t) {
      const Point z(u(rng), u(rng));
      const double oracle = std::log(lemniscate_constant(kk)) - std::log(std::pow(std::abs(z), kk) * std::abs(1.0 - z));
      CHECK(level_function(sys, {2, 1}, z) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
  CHECK(lemniscate_constant(1) == 0.25);
}

TEST_CASE("path integrals agree with the closed forms") {
  std::mt19937_64 rng(17);
  SUBCASE("two branches, upper half-plane") {
    const Point base(1.5, 0.5);
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)), base);
    std::uniform_real_distribution<double> ux(0.2, 3.0), uy(0.2, 2.0);
    for (int t = 0; t < 100; ++t) {
      const Point z(ux(rng), uy(rng));
      const std::size_t i = 1 + static_cast<std::size_t>(t % 2);
      CHECK(std::abs(harmonic_value_by_integration(sys, i, {base, z}) - harmonic_value(sys, i, z)) < 1e-10);
    }
  }
  SUBCASE("three complex branches, lower half-plane") {
    const Point base(1.5, -0.5);
    const auto sys = make_harmonic_system(three_branch(cr(0, 1), cr(1, 1, 2, 1)), base);
    std::uniform_real_distribution<double> ux(-1.0, 3.0), uy(-2.0, -0.2);
    for (int t = 0; t < 30; ++t) {
      const Point z(ux(rng), uy(rng));
      const std::size_t i = 1 + static_cast<std::size_t>(t % 3);
      const Point mid(z.real(), -2.5);
      CHECK(std::abs(harmonic_value_by_integration(sys, i, {base, Point(1.5, -2.5), mid, z}) -
                     harmonic_value(sys, i, z)) < 1e-10);
    }
  }
  SUBCASE("closed path and the first branch") {
    const Point base(2.0, 0.0);
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(2)), base);
    for (std::size_t i = 1; i <= 2; ++i)
      CHECK(std::abs(harmonic_value_by_integration(sys, i, {base, Point(3, 1), Point(2.5, -1), base})) < 1e-12);
    const Point z(4.0, 3.0);
    const double analytic = std::log(std::abs(1.0 - z)) - std::log(std::abs(1.0 - base));
    CHECK(std::abs(harmonic_value_by_integration(sys, 1, {base, z}) - analytic) < 1e-12);
  }
  SUBCASE("errors") {
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)), Point(1.5, 0.5));
    CHECK_THROWS_AS(harmonic_value_by_integration(sys, 1, {Point(2, 0), Point(3, 0)}), Error);
    try {
      harmonic_value_by_integration(sys, 2, {Point(1.5, 0.5), Point(0.5, 0), Point(0.5, -1)});
      FAIL("expected a reroute request");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Reroute);
    }
  }
}

TEST_CASE("tracing the k = 1 lemniscate") {
  const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)));
  const Point seed = seed_on_ray(sys, {2, 1}, 1.0, 1.0, 3.0);
  CHECK(std::abs(seed - Point((1 + std::sqrt(2.0)) / 2, 0)) < 1e-12);
  TraceOptions opts;
  opts.step = 5e-3;
  const auto curve = trace_level_curve(sys, {2, 1}, seed, opts);
  CHECK(curve.closed);
  CHECK(curve.points.size() > 100);
  REQUIRE(curve.critical_points.size() == 1);
  CHECK(std::abs(curve.critical_points[0].z - 0.5) < 1e-12);
  double worst = 0.0;
  for (const auto& z : curve.points) worst = std::max(worst, std::abs(std::abs(z * (1.0 - z)) - 0.25));
  CHECK(worst < 1e-10);
  CHECK(curve.max_residual() < 1e-10);
  for (const auto& z : curve.points) CHECK(z.real() >= 0.5 - 1e-12);

  SUBCASE("a seed on the saddle reports the split") {
    const auto at = trace_level_curve(sys, {2, 1}, 0.5, opts);
    REQUIRE(at.critical_points.size() == 1);
    CHECK(at.points.size() == 1);
    CHECK(at.stop_reasons.front() == "critical");
    // lemniscate crossing at right angles along the diagonals
    for (const auto& d : at.critical_points[0].directions) {
      const double angle = std::arg(d);
      const double off = std::remainder(angle - std::numbers::pi / 4, std::numbers::pi / 2);
      CHECK(std::abs(off) < 1e-12);
    }
  }

  SUBCASE("both lobes from the saddle") {
    const auto curves = trace_from_critical_point(sys, {2, 1}, 0.5, opts);
    REQUIRE(curves.size() == 4);
    int left = 0, right = 0;
    for (const auto& c : curves) {
      CHECK(c.closed);
      CHECK(c.max_residual() < 1e-10);
      const Point mid = c.points[c.points.size() / 2];
      (mid.real() < 0.5 ? left : right)++;
    }
    CHECK(left == 2);
    CHECK(right == 2);
  }

  SUBCASE("export round trip") {
    const auto back = import_level_curve(export_level_curve(curve));
    CHECK(back.pair == curve.pair);
    CHECK(back.closed);
    REQUIRE(back.points.size() == curve.points.size());
    for (std::size_t k = 0; k < curve.points.size(); ++k) CHECK(back.points[k] == curve.points[k]);
    CHECK_THROWS_AS(import_level_curve("x,y\n1,2\n"), Error);
    CHECK_THROWS_AS(import_level_curve("# level 2 1 closed=false\n1;2\n"), Error);
  }
}

TEST_CASE("complex-slope lemniscate through the branch point") {
  for (const auto& a : {cr(1, 2, -1, 1), cr(2, 1, 1, 1)}) {
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(a));
    const Point alpha = a.to_complex();
    const double eta = alpha.real(), zeta = alpha.imag();
    const Point p = alpha / (alpha + 1.0);
    const double rhs = std::pow(std::abs(alpha), eta) / std::pow(std::abs(alpha + 1.0), eta + 1) * std::exp(-zeta * std::arg(p));
    TraceOptions opts;
    opts.step = 5e-3;
    const Point seed = seed_on_ray(sys, {2, 1}, 1.0, 1.0, 5.0);
    const auto curve = trace_level_curve(sys, {2, 1}, seed, opts);
    CHECK(curve.closed);
    for (const auto& z : curve.points) {
      const double lhs = std::pow(std::abs(z), eta) * std::abs(1.0 - z) * std::exp(-zeta * std::arg(z));
      CHECK(std::abs(lhs / rhs - 1.0) < 1e-10);
    }
    bool through_p = false;
    for (const auto& z : curve.points) through_p = through_p || std::abs(z - p) < 1e-12;
    CHECK(through_p);
  }
}

TEST_CASE("trace errors") {
  const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)));
  CHECK_THROWS_AS(trace_level_curve(sys, {1, 1}, 1.2), Error);
  CHECK_THROWS_AS(trace_level_curve(sys, {1, 3}, 1.2), Error);
  CHECK_THROWS_AS(trace_level_curve(sys, {2, 1}, Point(5, 5)), Error);
  ParameterSchedule general = ParameterSchedule::lemniscate_family(cr(2));
  general.betas = {cr(3)};
  const auto gsys = make_harmonic_system(general);
  CHECK(gsys.mode == HarmonicMode::PathIntegral);
  CHECK_THROWS_AS(trace_level_curve(gsys, {2, 1}, 1.2), Error);
  CHECK_THROWS_AS(harmonic_value(gsys, 1, 2.0), Error);
}

TEST_CASE("psi") {
  const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)));
  CHECK(psi_value(sys, 1.05).index == 2);
  CHECK(psi_value(sys, Point(6e5, 8e5)).index == 1);
  const Point on((1 + std::sqrt(2.0)) / 2, 0);
  const auto tie = psi_value(sys, on);
  CHECK(tie.tie);
  CHECK(tie.index == 1);
  CHECK_THROWS_AS(psi_value(sys, 1.0), Error);

  // permuting the branches permutes the argmax and keeps the value (same basepoint)
  const Point base(2.0, 0.5);
  const auto a = make_harmonic_system(three_branch(cr(0, 1), cr(1, 1, 2, 1)), base);
  const auto b = make_harmonic_system(three_branch(cr(1, 1, 2, 1), cr(0, 1)), base);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    const Point z(u(rng), u(rng));
    const auto pa = psi_value(a, z), pb = psi_value(b, z);
    CHECK(pa.value == doctest::Approx(pb.value).epsilon(1e-13));
    if (pa.tie) continue;
    const std::size_t mapped = pa.index == 1 ? 1 : 5 - pa.index;
    CHECK(pb.index == mapped);
  }
}

TEST_CASE("region grid") {
  SUBCASE("k = 1 lemniscate") {
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)));
    const Box box{-1, 2, -1.5, 1.5};
    const auto grid = classify_regions(sys, box, 400);
    CHECK(grid.distinct_labels() == std::vector<int>{1, 2});
    TraceOptions opts;
    opts.step = 5e-3;
    std::vector<Point> traced;
    for (const auto& c : trace_from_critical_point(sys, {2, 1}, 0.5, opts))
      traced.insert(traced.end(), c.points.begin(), c.points.end());
    const auto k = grid.boundary_points();
    REQUIRE_FALSE(k.empty());
    double forward = 0.0, backward = 0.0;
    for (const auto& z : k) forward = std::max(forward, polyline_distance(z, traced));
    for (const auto& z : traced) {
      double best = 1e9;
      for (const auto& c : k) best = std::min(best, std::abs(z - c));
      backward = std::max(backward, best);
    }
    CHECK(std::max(forward, backward) < 2 * grid.cell_diagonal());
    const auto d = domain_mask(grid, true);
    const auto d_all = domain_mask(grid, false);
    std::size_t nd = 0, nall = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      nd += d[i];
      nall += d_all[i];
      if (d[i]) CHECK(d_all[i]);
    }
    CHECK(nd > 0);
    CHECK(nall > nd);  // the two lobes are separate components
  }
  SUBCASE("three branches give three labels") {
    const auto sys = make_harmonic_system(three_branch(cr(0, 1), cr(1, 1, 2, 1)));
    const auto grid = classify_regions(sys, Box{-1.5, 2.5, -2, 2}, 200);
    CHECK(grid.distinct_labels() == std::vector<int>{1, 2, 3});
  }
  SUBCASE("box inside one region") {
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)));
    const auto grid = classify_regions(sys, Box{5, 6, 5, 6}, 50);
    CHECK(grid.distinct_labels() == std::vector<int>{1});
    CHECK(grid.boundary_points().empty());
  }
  SUBCASE("raster export") {
    const auto sys = make_harmonic_system(ParameterSchedule::lemniscate_family(cr(1)));
    const auto grid = classify_regions(sys, Box{-1, 2, -1.5, 1.5}, 30);
    std::istringstream in(export_region_raster(grid));
    std::string line;
    std::getline(in, line);
    CHECK(line.find("\"resolution\":30") != std::string::npos);
    int rows = 0;
    while (std::getline(in, line)) {
      CHECK(line.size() == 30);
      ++rows;
    }
    CHECK(rows == 30);
    CHECK(export_boundary(grid).rfind("x,y,label\n", 0) == 0);

    const auto back = import_region_raster(export_region_raster(grid));
    CHECK(back.resolution == 30);
    CHECK(back.box.xmin == grid.box.xmin);
    CHECK(back.box.ymax == grid.box.ymax);
    CHECK(back.labels == grid.labels);
    CHECK(back.label_count == grid.label_count);
    // no Arg cut in this system, so the recomputed boundary is the same set
    CHECK(back.boundary == grid.boundary);
    CHECK_THROWS_AS(import_region_raster("{\"box\":[0,1,0,1],\"resolution\":2}\n12\n"), Error);
  }
}
