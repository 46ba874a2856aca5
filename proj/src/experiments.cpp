#include "hypzero/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "hypzero/errors.hpp"

namespace hypzero {

namespace {

using nlohmann::ordered_json;

ordered_json point_json(Point z) { return ordered_json::array({z.real(), z.imag()}); }

double nearest_rank(const std::vector<double>& sorted, double q) {
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size()))) ;
  return sorted[std::min(sorted.size() - 1, idx == 0 ? 0 : idx - 1)];
}

// Whether z lies within eps of a flagged cell center.
bool near_mask(const RegionGrid& grid, const std::vector<bool>& mask, Point z, double eps) {
  const double dx = (grid.box.xmax - grid.box.xmin) / grid.resolution;
  const double dy = (grid.box.ymax - grid.box.ymin) / grid.resolution;
  const int col = static_cast<int>(std::floor((z.real() - grid.box.xmin) / dx));
  const int row = static_cast<int>(std::floor((z.imag() - grid.box.ymin) / dy));
  const int rx = static_cast<int>(std::ceil(eps / dx)) + 1;
  const int ry = static_cast<int>(std::ceil(eps / dy)) + 1;
  for (int r = std::max(0, row - ry); r <= std::min(grid.resolution - 1, row + ry); ++r)
    for (int c = std::max(0, col - rx); c <= std::min(grid.resolution - 1, col + rx); ++c)
      if (mask[static_cast<std::size_t>(r) * grid.resolution + c] && std::abs(grid.center(r, c) - z) <= eps) return true;
  return false;
}

struct Masks {
  std::vector<bool> k, kd, kd_all;
};

Masks masks_of(const RegionGrid& grid) {
  Masks m;
  m.k = grid.boundary;
  const auto d = domain_mask(grid, true);
  const auto d_all = domain_mask(grid, false);
  m.kd.resize(m.k.size());
  m.kd_all.resize(m.k.size());
  for (std::size_t i = 0; i < m.k.size(); ++i) {
    m.kd[i] = m.k[i] && d[i];
    m.kd_all[i] = m.k[i] && d_all[i];
  }
  return m;
}

}  // namespace

Restriction Restriction::right_of(double x) {
  std::ostringstream d;
  d.precision(17);
  d << "Re z > " << x;
  return {d.str(), [x](Point z) { return z.real() > x; }};
}

double polyline_distance(Point z, const std::vector<Point>& polyline) {
  if (polyline.empty()) throw invalid_input("polyline is empty");
  double best = std::abs(z - polyline.front());
  for (std::size_t k = 1; k < polyline.size(); ++k) {
    const Point a = polyline[k - 1], d = polyline[k] - a;
    const double len2 = std::norm(d);
    const double t = len2 == 0.0 ? 0.0 : std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    best = std::min(best, std::abs(z - (a + t * d)));
  }
  return best;
}

DistanceReport zero_curve_distance(const std::vector<Point>& roots, const std::vector<std::vector<Point>>& curves,
                                   const Restriction& restriction) {
  if (curves.empty()) throw invalid_input("zero_curve_distance: no curves given");
  for (const auto& c : curves)
    if (c.empty()) throw invalid_input("zero_curve_distance: the curve has no points");
  DistanceReport r;
  r.n = static_cast<unsigned>(roots.size());
  r.total_roots = roots.size();
  r.restriction = restriction.description;
  for (const auto& z : roots) {
    if (!restriction.accept(z)) continue;
    double d = polyline_distance(z, curves.front());
    for (std::size_t k = 1; k < curves.size(); ++k) d = std::min(d, polyline_distance(z, curves[k]));
    r.roots.push_back(z);
    r.distances.push_back(d);
  }
  r.vacuous = r.distances.empty();
  if (r.vacuous) return r;
  std::vector<double> sorted = r.distances;
  std::sort(sorted.begin(), sorted.end());
  r.max = sorted.back();
  r.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) r.quantiles.push_back(nearest_rank(sorted, q));
  return r;
}

DistanceReport zero_curve_distance(const std::vector<Point>& roots, const std::vector<Point>& curve,
                                   const Restriction& restriction) {
  return zero_curve_distance(roots, std::vector<std::vector<Point>>{curve}, restriction);
}

DistanceReport zero_curve_distance(const RootCountingMeasure& m, const std::vector<Point>& curve,
                                   const Restriction& restriction) {
  return zero_curve_distance(m.as_complex(), curve, restriction);
}

std::string DistanceReport::to_json() const {
  ordered_json doc;
  doc["n"] = n;
  doc["restriction"] = restriction;
  doc["total_roots"] = total_roots;
  doc["restricted_roots"] = distances.size();
  doc["vacuous"] = vacuous;
  doc["max"] = max;
  doc["mean"] = mean;
  doc["quantiles"] = {{"0.1", vacuous ? 0.0 : quantiles[0]}, {"0.25", vacuous ? 0.0 : quantiles[1]},
                      {"0.5", vacuous ? 0.0 : quantiles[2]}, {"0.75", vacuous ? 0.0 : quantiles[3]},
                      {"0.9", vacuous ? 0.0 : quantiles[4]}};
  return doc.dump(2);
}

int winding_number(Point z, const std::vector<Point>& loop) {
  if (loop.size() < 3) throw invalid_input("winding_number needs a closed polyline");
  int wn = 0;
  const std::size_t n = loop.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = loop[k], b = loop[(k + 1) % n];
    const double cross = (b.real() - a.real()) * (z.imag() - a.imag()) - (z.real() - a.real()) * (b.imag() - a.imag());
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && cross > 0) ++wn;
    } else if (b.imag() <= z.imag() && cross < 0) {
      --wn;
    }
  }
  return wn;
}

const char* side_name(Side s) { return s == Side::Inside ? "inside" : "outside"; }

Side side_of(Point z, const std::vector<Point>& loop) { return winding_number(z, loop) != 0 ? Side::Inside : Side::Outside; }

ConvergenceReport cauchy_convergence(const ParameterSchedule& schedule, const std::vector<RootCountingMeasure>& measures,
                                     const std::vector<std::pair<Point, Side>>& test_points) {
  schedule.validate();
  if (schedule.numerator_count() != 2 || !schedule.is_degenerate())
    throw invalid_input("cauchy_convergence compares against the two rational branches of a degenerate 2F1 schedule");
  if (measures.empty()) throw invalid_input("cauchy_convergence needs at least one degree");
  ConvergenceReport report;
  report.schedule_hash = schedule.hash();
  for (const auto& m : measures) {
    if (!report.ns.empty() && m.size() <= report.ns.back())
      throw invalid_input("cauchy_convergence needs strictly increasing degrees");
    report.ns.push_back(static_cast<unsigned>(m.size()));
    report.precision_bits.push_back(m.precision_bits);
  }
  const Point alpha = schedule.alphas[1].to_complex();
  for (const auto& [z, side] : test_points) {
    ConvergencePoint cp;
    cp.z = z;
    cp.side = side;
    cp.target = side == Side::Inside ? -alpha / z : 1.0 / (z - 1.0);
    for (const auto& m : measures) {
      try {
        const Point c = cauchy_transform_at(m, BigComplex(z, m.precision_bits)).to_complex();
        cp.deviations.push_back(std::abs(c - cp.target));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Pole) throw;
        cp.deviations.push_back(std::numeric_limits<double>::quiet_NaN());
        cp.notes.push_back("excluded at n=" + std::to_string(m.size()) + ": within the cluster radius of a root");
      }
    }
    std::vector<double> finite;
    for (double d : cp.deviations)
      if (std::isfinite(d)) finite.push_back(d);
    cp.improved = finite.size() >= 2 && std::isfinite(cp.deviations.front()) && std::isfinite(cp.deviations.back()) &&
                  cp.deviations.back() < cp.deviations.front();
    cp.monotone = finite.size() == cp.deviations.size() && finite.size() >= 2;
    for (std::size_t k = 1; k < finite.size() && cp.monotone; ++k) cp.monotone = finite[k] < finite[k - 1];
    report.points.push_back(std::move(cp));
  }
  return report;
}

ConvergenceReport cauchy_convergence(const ParameterSchedule& schedule, const std::vector<unsigned>& ns,
                                     const std::vector<std::pair<Point, Side>>& test_points, const RootOptions& options) {
  std::vector<RootCountingMeasure> measures;
  for (unsigned n : ns) measures.push_back(find_roots(build_polynomial(schedule, n), options));
  return cauchy_convergence(schedule, measures, test_points);
}

std::string ConvergenceReport::to_json() const {
  ordered_json doc;
  doc["schedule_hash"] = schedule_hash;
  doc["n"] = ns;
  doc["precision_bits"] = precision_bits;
  auto pts = ordered_json::array();
  for (const auto& p : points) {
    ordered_json e;
    e["z"] = point_json(p.z);
    e["side"] = side_name(p.side);
    e["target"] = point_json(p.target);
    e["deviations"] = p.deviations;
    e["improved"] = p.improved;
    e["monotone"] = p.monotone;
    if (!p.notes.empty()) e["notes"] = p.notes;
    pts.push_back(std::move(e));
  }
  doc["points"] = std::move(pts);
  return doc.dump(2);
}

Conjecture2Score conjecture2_score(const std::vector<Point>& roots, const RegionGrid& grid, double epsilon) {
  Conjecture2Score s;
  s.epsilon = epsilon > 0 ? epsilon : 3.0 * grid.cell_diagonal();
  s.roots = roots.size();
  if (roots.empty()) return s;
  const Masks m = masks_of(grid);
  std::size_t k = 0, kd = 0, kd_all = 0;
  for (const auto& z : roots) {
    if (!grid.box.contains(z)) {
      ++s.outside_grid;
      continue;
    }
    k += near_mask(grid, m.k, z, s.epsilon);
    kd += near_mask(grid, m.kd, z, s.epsilon);
    kd_all += near_mask(grid, m.kd_all, z, s.epsilon);
  }
  const double total = static_cast<double>(roots.size());
  s.near_k = static_cast<double>(k) / total;
  s.near_k_in_d = static_cast<double>(kd) / total;
  s.near_k_in_d_all = static_cast<double>(kd_all) / total;
  return s;
}

std::string Conjecture2Score::to_json() const {
  ordered_json doc;
  doc["epsilon"] = epsilon;
  doc["roots"] = roots;
  doc["outside_grid"] = outside_grid;
  doc["near_K"] = near_k;
  doc["near_K_in_D"] = near_k_in_d;
  doc["near_K_in_D_all"] = near_k_in_d_all;
  return doc.dump(2);
}

Box cloud_box(const std::vector<Point>& points, double margin) {
  if (points.empty()) throw invalid_input("cloud_box needs at least one point");
  double xmin = points[0].real(), xmax = xmin, ymin = points[0].imag(), ymax = ymin;
  for (const auto& z : points) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  const double side = std::max(1e-3, (1 + 2 * margin) * std::max(xmax - xmin, ymax - ymin));
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  return {cx - side / 2, cx + side / 2, cy - side / 2, cy + side / 2};
}

NullModel uniform_null_score(const RegionGrid& grid, double epsilon, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw invalid_input("null model needs at least one sample");
  const double eps = epsilon > 0 ? epsilon : 3.0 * grid.cell_diagonal();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(grid.box.xmin, grid.box.xmax), uy(grid.box.ymin, grid.box.ymax);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    hits += near_mask(grid, grid.boundary, Point(x, y), eps);
  }
  NullModel out;
  out.samples = samples;
  out.fraction = static_cast<double>(hits) / static_cast<double>(samples);
  out.sigma = std::sqrt(out.fraction * (1.0 - out.fraction) / static_cast<double>(samples));
  return out;
}

}  // namespace hypzero
