#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hypzero/potential.hpp"
#include "hypzero/roots.hpp"
#include "hypzero/schedule.hpp"

namespace hypzero {

/// Which roots a distance report looks at.
struct Restriction {
  std::string description = "none";
  std::function<bool(Point)> accept = [](Point) { return true; };

  static Restriction none() { return {}; }
  /// Re z > x.
  static Restriction right_of(double x);
};

/// Segment-projected distance from z to a polyline.
double polyline_distance(Point z, const std::vector<Point>& polyline);

struct DistanceReport {
  unsigned n = 0;
  std::string restriction;
  std::size_t total_roots = 0;
  /// Roots passing the restriction and their distances to the curve.
  std::vector<Point> roots;
  std::vector<double> distances;
  double max = 0, mean = 0;
  /// Quantiles at 0.1, 0.25, 0.5, 0.75, 0.9 (nearest rank).
  std::vector<double> quantiles;
  /// No root satisfied the restriction.
  bool vacuous = true;

  std::string to_json() const;
};

DistanceReport zero_curve_distance(const std::vector<Point>& roots, const std::vector<Point>& curve,
                                   const Restriction& restriction = {});
/// Distance to the nearest of several polylines.
DistanceReport zero_curve_distance(const std::vector<Point>& roots, const std::vector<std::vector<Point>>& curves,
                                   const Restriction& restriction = {});
DistanceReport zero_curve_distance(const RootCountingMeasure& m, const std::vector<Point>& curve,
                                   const Restriction& restriction = {});

/// Winding number of a closed polyline (first point repeated or not) around z.
int winding_number(Point z, const std::vector<Point>& loop);

enum class Side { Inside, Outside };
const char* side_name(Side s);
Side side_of(Point z, const std::vector<Point>& loop);

struct ConvergencePoint {
  Point z;
  Side side = Side::Outside;
  /// The rational branch the transform should approach: -alpha_2 / z inside, 1/(z - 1) outside.
  Point target;
  /// |C_n(z) - target| per n; NaN where the point was excluded.
  std::vector<double> deviations;
  std::vector<std::string> notes;
  /// Deviation at the largest n below the one at the smallest n.
  bool improved = false;
  /// Strictly decreasing along the whole n list.
  bool monotone = false;
};

struct ConvergenceReport {
  std::string schedule_hash;
  std::vector<unsigned> ns;
  std::vector<int> precision_bits;
  std::vector<ConvergencePoint> points;

  std::string to_json() const;
};

/// Cauchy transforms of precomputed measures (one per n, increasing) against the rational branches
/// of a degenerate two-branch schedule.
ConvergenceReport cauchy_convergence(const ParameterSchedule& schedule, const std::vector<RootCountingMeasure>& measures,
                                     const std::vector<std::pair<Point, Side>>& test_points);
ConvergenceReport cauchy_convergence(const ParameterSchedule& schedule, const std::vector<unsigned>& ns,
                                     const std::vector<std::pair<Point, Side>>& test_points,
                                     const RootOptions& options = {});

struct Conjecture2Score {
  double epsilon = 0;
  std::size_t roots = 0;
  /// Roots outside the grid box (counted as not near K).
  std::size_t outside_grid = 0;
  /// Fraction of roots within epsilon of a K cell.
  double near_k = 0;
  /// Same, restricted to K cells inside the largest-component domain D.
  double near_k_in_d = 0;
  /// Same, with D taken as every non-H_1 region.
  double near_k_in_d_all = 0;

  std::string to_json() const;
};

/// Epsilon defaults to 3 cell diagonals when nonpositive.
Conjecture2Score conjecture2_score(const std::vector<Point>& roots, const RegionGrid& grid, double epsilon = 0);

/// Square box around a point cloud: side (1 + 2 margin) times the larger extent, same center.
Box cloud_box(const std::vector<Point>& points, double margin = 0.25);

struct NullModel {
  std::size_t samples = 0;
  double fraction = 0;
  /// Binomial standard error of the fraction.
  double sigma = 0;
};

/// The same score for uniform random points in the grid box.
NullModel uniform_null_score(const RegionGrid& grid, double epsilon, std::size_t samples, std::uint64_t seed);

}  // namespace hypzero
