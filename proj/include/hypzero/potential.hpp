#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypzero/schedule.hpp"

namespace hypzero {

using Point = std::complex<double>;

enum class HarmonicMode { ClosedForm, PathIntegral };

/// The harmonic functions H_i(z) = Re of the integral of branch f_i from the basepoint to z.
/// Branch indices are 1-based: f_1 = 1/(z-1), f_i = -alpha_i / z in the degenerate case.
struct HarmonicSystem {
  ParameterSchedule schedule;
  HarmonicMode mode = HarmonicMode::ClosedForm;
  std::vector<Point> alphas;
  Point basepoint;
  /// branch_points[i-2] = alpha_i / (alpha_i + 1) for i = 2..A (closed-form mode).
  std::vector<Point> branch_points;
  /// offsets[i-1] = H_1(p_i) - H_i(p_i); offsets[0] = 0.
  std::vector<double> offsets;
  /// Double-precision copy of the curve coefficients: curve_terms[j][k] multiplies z^j w^k.
  std::vector<std::vector<Point>> curve_terms;

  std::size_t branch_count() const { return alphas.size(); }
  /// Some H_i carries an Arg z term, so the negative real axis is a cut.
  bool has_cut() const;
};

/// Closed-form mode for degenerate schedules, path-integral mode otherwise. The basepoint defaults to
/// p_2 in closed-form mode and to z = 2 in path-integral mode.
HarmonicSystem make_harmonic_system(const ParameterSchedule& schedule, std::optional<Point> basepoint = {});

/// Closed-form branch f_i(z).
Point branch_value(const HarmonicSystem& sys, std::size_t i, Point z);
/// Closed-form H_i(z) with the principal Arg. Throws Pole at z = 0 or z = 1.
double harmonic_value(const HarmonicSystem& sys, std::size_t i, Point z);
/// H_i(z) + offsets[i-1].
double shifted_value(const HarmonicSystem& sys, std::size_t i, Point z);

/// All A roots in w of A(z, .) in double precision (companion eigenvalues plus Newton polish).
std::vector<Point> curve_branches(const HarmonicSystem& sys, Point z);

struct IntegrationOptions {
  double tolerance = 1e-13;
  /// Branch separation (relative to the largest branch value) below which the path must be rerouted.
  double collision_threshold = 1e-7;
  int max_panels = 200000;
};

/// Re of the integral of f_i along the polyline path (which must start at the basepoint), with f_i
/// continued analytically from its value at the basepoint. Throws Reroute on a branch collision.
double harmonic_value_by_integration(const HarmonicSystem& sys, std::size_t i, const std::vector<Point>& path,
                                     const IntegrationOptions& options = {});

/// Pair (i, j) denotes the implicit curve H~_i - H~_j = 0.
using LevelPair = std::pair<std::size_t, std::size_t>;

double level_function(const HarmonicSystem& sys, LevelPair pair, Point z);
/// Gradient of the level function as a complex number (d/dx + i d/dy).
Point level_gradient(const HarmonicSystem& sys, LevelPair pair, Point z);
/// Zeros of f_i - f_j: the critical points of the level function.
std::vector<Point> level_critical_points(const HarmonicSystem& sys, LevelPair pair);

struct CriticalPoint {
  Point z;
  /// The four directions in which the level set leaves the saddle.
  std::array<Point, 4> directions;
};

struct Box {
  double xmin = -2, xmax = 2, ymin = -2, ymax = 2;
  bool contains(Point z) const { return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax; }
};

struct TraceOptions {
  double step = 1e-2;
  double tolerance = 1e-13;
  int max_steps = 20000;
  /// Defaults to a square of side 20 max(1, |seed|) around the origin.
  std::optional<Box> box;
};

struct LevelCurve {
  LevelPair pair{1, 2};
  std::vector<Point> points;
  /// |level_function| at each point.
  std::vector<double> residuals;
  bool closed = false;
  std::vector<CriticalPoint> critical_points;
  /// Why each end stopped: "closed", "critical", "cut", "box", "max_steps", "stalled".
  std::vector<std::string> stop_reasons;

  double max_residual() const;
};

/// Predictor-corrector trace of H~_i - H~_j = 0 from seed in both directions.
LevelCurve trace_level_curve(const HarmonicSystem& sys, LevelPair pair, Point seed, const TraceOptions& options = {});

/// One trace per outgoing direction at a saddle on the level set.
std::vector<LevelCurve> trace_from_critical_point(const HarmonicSystem& sys, LevelPair pair, Point critical,
                                                  const TraceOptions& options = {});

/// Bisection for a zero of the level function on the segment [a, b]; throws if there is no sign change.
Point seed_on_segment(const HarmonicSystem& sys, LevelPair pair, Point a, Point b);
/// Samples origin + t direction for t in (0, max_t] and bisects the first sign change.
Point seed_on_ray(const HarmonicSystem& sys, LevelPair pair, Point origin, Point direction, double max_t = 10.0);

/// CSV "x,y,residual" with a leading "# level i j closed=.." line.
std::string export_level_curve(const LevelCurve& curve);
/// Reads the export back: pair, closed flag, points and residuals.
LevelCurve import_level_curve(std::string_view text);

struct PsiValue {
  double value = 0;
  std::size_t index = 1;
  bool tie = false;
};

/// max over {H_1, H~_2, .., H~_A}; ties within 1e-10 go to the smallest index and set tie.
PsiValue psi_value(const HarmonicSystem& sys, Point z);

struct RegionGrid {
  Box box;
  int resolution = 0;
  /// Row-major, row 0 at ymin. Label 0 marks a cell touching the singular points 0 or 1.
  std::vector<int> labels;
  /// The discrete singular set K: cells with a 4-neighbour carrying a different label.
  std::vector<bool> boundary;
  std::size_t label_count = 0;

  int label(int row, int col) const { return labels[static_cast<std::size_t>(row) * resolution + col]; }
  bool in_boundary(int row, int col) const { return boundary[static_cast<std::size_t>(row) * resolution + col]; }
  Point center(int row, int col) const;
  double cell_diagonal() const;
  std::vector<Point> boundary_points() const;
  std::vector<int> distinct_labels() const;
};

/// Per-cell argmax of psi; pairs straddling the Arg cut are not counted as boundary.
RegionGrid classify_regions(const HarmonicSystem& sys, const Box& box, int resolution);

/// Approximate domain D: the largest connected non-H_1 region plus adjacent boundary cells, or every
/// non-H_1 cell plus its boundary when largest_only is false.
std::vector<bool> domain_mask(const RegionGrid& grid, bool largest_only = true);

/// JSON header line followed by one character per cell, top row (ymax) first.
std::string export_region_raster(const RegionGrid& grid);
/// CSV "x,y,label" of the boundary cells.
std::string export_boundary(const RegionGrid& grid);
/// Reads a raster back. Boundary cells are recomputed from plain 4-neighbour label changes.
RegionGrid import_region_raster(std::string_view text);

}  // namespace hypzero
