#include "hypzero/potential.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypzero/curve.hpp"
#include "hypzero/errors.hpp"

namespace hypzero {

namespace {

constexpr double kSingularRadius = 1e-300;
constexpr double kTieTolerance = 1e-10;

// Principal argument in (-pi, pi]; -0.0 on the negative axis maps to +pi.
double principal_arg(Point z) {
  if (z.imag() == 0.0 && z.real() < 0.0) return std::numbers::pi;
  return std::arg(z);
}

void require_closed_form(const HarmonicSystem& sys, const char* what) {
  if (sys.mode != HarmonicMode::ClosedForm)
    throw invalid_input(std::string(what) + " needs a degenerate schedule (closed-form harmonic functions)");
}

void require_index(const HarmonicSystem& sys, std::size_t i) {
  if (i < 1 || i > sys.branch_count())
    throw invalid_input("branch index " + std::to_string(i) + " outside 1.." + std::to_string(sys.branch_count()));
}

void require_regular(Point z) {
  if (std::abs(z) < kSingularRadius || std::abs(z - 1.0) < kSingularRadius)
    throw Error(ErrorKind::Pole, "logarithmic singularity at z = 0 or z = 1");
}

Point branch_derivative(const HarmonicSystem& sys, std::size_t i, Point z) {
  if (i == 1) return -1.0 / ((z - 1.0) * (z - 1.0));
  return sys.alphas[i - 1] / (z * z);
}

// Distance from c to the segment [a, b].
double segment_distance(Point c, Point a, Point b) {
  const Point d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(c - a);
  const double t = std::clamp(((c - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(c - (a + t * d));
}

double arg_weight(const HarmonicSystem& sys, LevelPair pair) {
  const double yi = pair.first == 1 ? 0.0 : sys.alphas[pair.first - 1].imag();
  const double yj = pair.second == 1 ? 0.0 : sys.alphas[pair.second - 1].imag();
  return yi - yj;
}

struct Tracer {
  const HarmonicSystem& sys;
  LevelPair pair;
  TraceOptions opts;
  Box box;
  bool cut = false;
  double grad_floor = 0.0;
  std::vector<Point> criticals;

  double g(Point z) const { return level_function(sys, pair, z); }
  Point grad(Point z) const { return level_gradient(sys, pair, z); }

  std::optional<Point> correct(Point z) const {
    for (int it = 0; it < 40; ++it) {
      const double v = g(z);
      if (!std::isfinite(v)) return std::nullopt;
      if (std::abs(v) < opts.tolerance) return z;
      const Point gr = grad(z);
      const double n2 = std::norm(gr);
      if (n2 == 0.0) return std::nullopt;
      z -= v * gr / n2;
    }
    if (std::abs(g(z)) < 1e-11) return z;
    return std::nullopt;
  }

  CriticalPoint saddle(Point c) const {
    const Point second = branch_derivative(sys, pair.first, c) - branch_derivative(sys, pair.second, c);
    CriticalPoint cp{c, {}};
    const double base = (std::numbers::pi / 2 - std::arg(second)) / 2;
    for (int k = 0; k < 4; ++k) cp.directions[static_cast<std::size_t>(k)] = std::polar(1.0, base + k * std::numbers::pi / 2);
    return cp;
  }

  std::optional<Point> known_critical_near(Point z, double radius) const {
    for (const auto& c : criticals)
      if (std::abs(z - c) < radius) return c;
    return std::nullopt;
  }

  bool crosses_cut(Point a, Point b) const {
    if (!cut) return false;
    if ((a.imag() > 0) == (b.imag() > 0) && a.imag() != 0 && b.imag() != 0) return false;
    const double t = a.imag() / (a.imag() - b.imag());
    const double x = std::isfinite(t) ? a.real() + t * (b.real() - a.real()) : a.real();
    return x < 0.0;
  }

  struct March {
    std::vector<Point> points;
    std::string reason;
    std::optional<CriticalPoint> critical;
  };

  // Walk along the level set from start with the given heading. `ignore` is a critical point the
  // walk starts on; it only counts once the walk has left its neighbourhood.
  March march(Point start, Point heading, bool allow_closure, std::optional<Point> ignore = {}) const {
    March out;
    out.points.push_back(start);
    Point z = start;
    Point dir = heading / std::abs(heading);
    double h = opts.step;
    bool left_start = false;
    bool left_ignore = !ignore.has_value();
    for (int step = 0; step < opts.max_steps; ++step) {
      const Point gr = grad(z);
      if (std::abs(gr) < grad_floor) {
        out.reason = "critical";
        out.critical = saddle(z);
        return out;
      }
      Point t = Point(0, 1) * gr / std::abs(gr);
      if ((t * std::conj(dir)).real() < 0) t = -t;

      std::optional<Point> next;
      while (true) {
        const Point pred = z + h * t;
        next = correct(pred);
        if (next) {
          const Point gn = grad(*next);
          Point tn = Point(0, 1) * gn / std::abs(gn);
          if ((tn * std::conj(t)).real() < 0) tn = -tn;
          const bool smooth = std::abs(*next - pred) < 0.5 * h && std::abs(std::arg(tn * std::conj(t))) < 0.5;
          if (smooth) break;
        }
        h *= 0.5;
        if (h < opts.step * 1e-6) {
          out.reason = crosses_cut(z, z + opts.step * t) ? "cut" : "stalled";
          return out;
        }
      }
      const Point zn = *next;

      for (const auto& c : criticals) {
        if (!left_ignore && ignore && std::abs(c - *ignore) < 1e-12) continue;
        if (std::abs(zn - c) < opts.step || segment_distance(c, z, zn) < 0.5 * opts.step) {
          out.points.push_back(c);
          out.reason = "critical";
          out.critical = saddle(c);
          return out;
        }
      }
      if (allow_closure && left_start && segment_distance(start, z, zn) < 0.5 * opts.step) {
        out.points.push_back(start);
        out.reason = "closed";
        return out;
      }
      if (crosses_cut(z, zn)) {
        out.reason = "cut";
        return out;
      }
      if (!box.contains(zn)) {
        out.reason = "box";
        return out;
      }
      out.points.push_back(zn);
      dir = zn - z;
      z = zn;
      if (std::abs(z - start) > 2 * opts.step) left_start = true;
      if (ignore && std::abs(z - *ignore) > 2 * opts.step) left_ignore = true;
      h = std::min(opts.step, 1.5 * h);
    }
    out.reason = "max_steps";
    return out;
  }
};

Tracer make_tracer(const HarmonicSystem& sys, LevelPair pair, const TraceOptions& options, Point seed) {
  require_closed_form(sys, "level-curve tracing");
  require_index(sys, pair.first);
  require_index(sys, pair.second);
  if (pair.first == pair.second) throw invalid_input("level pair needs two different branch indices");
  if (!(options.step > 0)) throw invalid_input("trace step must be positive");
  Tracer tr{sys, pair, options, Box{}, false, 0.0, {}};
  if (options.box) {
    tr.box = *options.box;
  } else {
    const double r = 10.0 * std::max(1.0, std::abs(seed));
    tr.box = Box{-r, r, -r, r};
  }
  tr.cut = arg_weight(sys, pair) != 0.0;
  for (const auto& c : level_critical_points(sys, pair))
    if (std::abs(level_function(sys, pair, c)) < 1e-8) tr.criticals.push_back(c);

  std::vector<double> samples;
  constexpr int kSamples = 17;
  for (int a = 0; a < kSamples; ++a)
    for (int b = 0; b < kSamples; ++b) {
      const Point z(tr.box.xmin + (tr.box.xmax - tr.box.xmin) * (a + 0.5) / kSamples,
                    tr.box.ymin + (tr.box.ymax - tr.box.ymin) * (b + 0.5) / kSamples);
      if (std::abs(z) < 1e-3 || std::abs(z - 1.0) < 1e-3) continue;
      const double m = std::abs(level_gradient(sys, pair, z));
      if (std::isfinite(m)) samples.push_back(m);
    }
  if (!samples.empty()) {
    auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
    std::nth_element(samples.begin(), mid, samples.end());
    tr.grad_floor = 1e-6 * *mid;
  }
  return tr;
}

void finish(const HarmonicSystem& sys, LevelCurve& curve) {
  curve.residuals.clear();
  for (const auto& z : curve.points) curve.residuals.push_back(std::abs(level_function(sys, curve.pair, z)));
}

void add_critical(LevelCurve& curve, const CriticalPoint& cp) {
  for (const auto& c : curve.critical_points)
    if (std::abs(c.z - cp.z) < 1e-12) return;
  curve.critical_points.push_back(cp);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool HarmonicSystem::has_cut() const {
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (alphas[i].imag() != 0.0) return true;
  return false;
}

HarmonicSystem make_harmonic_system(const ParameterSchedule& schedule, std::optional<Point> basepoint) {
  const BivariateCurve curve = build_curve(schedule);
  HarmonicSystem sys;
  sys.schedule = schedule;
  sys.mode = schedule.is_degenerate() ? HarmonicMode::ClosedForm : HarmonicMode::PathIntegral;
  for (const auto& a : schedule.alphas) sys.alphas.push_back(a.to_complex());
  for (const auto& row : curve.terms) {
    std::vector<Point> r;
    for (const auto& c : row) r.push_back(c.to_complex());
    sys.curve_terms.push_back(std::move(r));
  }

  if (sys.mode == HarmonicMode::ClosedForm) {
    for (std::size_t i = 1; i < schedule.alphas.size(); ++i) {
      const ComplexRational denom = schedule.alphas[i] + ComplexRational(1);
      if (denom.is_zero()) throw invalid_input("alpha_" + std::to_string(i + 1) + " = -1 has no branch point");
      sys.branch_points.push_back((schedule.alphas[i] / denom).to_complex());
    }
  }
  sys.basepoint = basepoint ? *basepoint : (sys.branch_points.empty() ? Point(2.0, 0.0) : sys.branch_points.front());
  require_regular(sys.basepoint);

  sys.offsets.assign(sys.branch_count(), 0.0);
  if (sys.mode == HarmonicMode::ClosedForm) {
    for (std::size_t i = 2; i <= sys.branch_count(); ++i) {
      const Point p = sys.branch_points[i - 2];
      sys.offsets[i - 1] = harmonic_value(sys, 1, p) - harmonic_value(sys, i, p);
    }
  }
  return sys;
}

Point branch_value(const HarmonicSystem& sys, std::size_t i, Point z) {
  require_index(sys, i);
  if (i == 1) return 1.0 / (z - 1.0);
  return -sys.alphas[i - 1] / z;
}

double harmonic_value(const HarmonicSystem& sys, std::size_t i, Point z) {
  require_closed_form(sys, "harmonic_value");
  require_index(sys, i);
  require_regular(z);
  const Point p = sys.basepoint;
  if (i == 1) return std::log(std::abs(1.0 - z)) - std::log(std::abs(1.0 - p));
  const Point a = sys.alphas[i - 1];
  return -a.real() * std::log(std::abs(z)) + a.imag() * principal_arg(z) + a.real() * std::log(std::abs(p)) -
         a.imag() * principal_arg(p);
}

double shifted_value(const HarmonicSystem& sys, std::size_t i, Point z) {
  return harmonic_value(sys, i, z) + sys.offsets[i - 1];
}

std::vector<Point> curve_branches(const HarmonicSystem& sys, Point z) {
  const std::size_t d = sys.branch_count();
  std::vector<Point> q(d + 1, Point(0, 0));
  for (std::size_t k = 0; k <= d; ++k) {
    Point acc(0, 0);
    for (std::size_t j = sys.curve_terms.size(); j-- > 0;) acc = acc * z + sys.curve_terms[j][k];
    q[k] = acc;
  }
  if (q[d] == Point(0, 0)) throw Error(ErrorKind::Pole, "curve_branches: leading coefficient vanishes");
  std::vector<Point> roots;
  if (d == 1) {
    roots.push_back(-q[0] / q[1]);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 1; r < d; ++r) companion(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r - 1)) = 1.0;
    for (std::size_t r = 0; r < d; ++r)
      companion(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d - 1)) = -q[r] / q[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    for (Eigen::Index r = 0; r < solver.eigenvalues().size(); ++r) roots.push_back(solver.eigenvalues()(r));
  }
  for (auto& w : roots) {
    for (int it = 0; it < 3; ++it) {
      Point p = q[d], dp(0, 0);
      for (std::size_t k = d; k-- > 0;) {
        dp = dp * w + p;
        p = p * w + q[k];
      }
      if (dp == Point(0, 0)) break;
      const Point next = w - p / dp;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      w = next;
    }
  }
  std::sort(roots.begin(), roots.end(), [](Point a, Point b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return roots;
}

double harmonic_value_by_integration(const HarmonicSystem& sys, std::size_t i, const std::vector<Point>& path,
                                     const IntegrationOptions& options) {
  require_index(sys, i);
  if (path.empty()) throw invalid_input("integration path is empty");
  if (std::abs(path.front() - sys.basepoint) > 1e-12 * std::max(1.0, std::abs(sys.basepoint)))
    throw invalid_input("integration path must start at the basepoint");
  for (const auto& z : path) require_regular(z);

  // 5-point Gauss-Legendre on [0, 1].
  static const std::array<double, 5> nodes = {0.046910077030668004, 0.23076534494715845, 0.5, 0.76923465505284155,
                                              0.953089922969332};
  static const std::array<double, 5> weights = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                                0.23931433524968324, 0.11846344252809454};

  // Pick the branch nearest to `prev`; reroute when branches nearly collide or the choice is ambiguous.
  auto follow = [&](Point z, Point prev, bool& ok) {
    const auto ws = curve_branches(sys, z);
    double scale = 0.0, sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < ws.size(); ++a) {
      scale = std::max(scale, std::abs(ws[a]));
      for (std::size_t b = a + 1; b < ws.size(); ++b) sep = std::min(sep, std::abs(ws[a] - ws[b]));
    }
    if (sep < options.collision_threshold * std::max(1.0, scale))
      throw Error(ErrorKind::Reroute, "branch collision near z = (" + fmt(z.real()) + ", " + fmt(z.imag()) + "); reroute the path");
    std::size_t best = 0;
    for (std::size_t a = 1; a < ws.size(); ++a)
      if (std::abs(ws[a] - prev) < std::abs(ws[best] - prev)) best = a;
    ok = std::abs(ws[best] - prev) < 0.25 * sep;
    return ws[best];
  };

  bool ok = true;
  Point w = follow(sys.basepoint, branch_value(sys, i, sys.basepoint), ok);
  if (!ok) throw Error(ErrorKind::Reroute, "branch at the basepoint is ambiguous; choose another basepoint");

  Point total(0, 0);
  int panels = 0;
  for (std::size_t s = 1; s < path.size(); ++s) {
    const Point a = path[s - 1], b = path[s];
    const Point len = b - a;
    if (len == Point(0, 0)) continue;
    double t = 0.0, h = 0.25;
    while (t < 1.0) {
      h = std::min(h, 1.0 - t);
      if (++panels > options.max_panels) throw Error(ErrorKind::NonConvergence, "path integration: too many panels");
      // Points of the full panel and of both halves, in order of the path parameter.
      std::vector<std::pair<double, int>> pts;  // (parameter, role)
      for (int k = 0; k < 5; ++k) {
        pts.push_back({t + h * nodes[static_cast<std::size_t>(k)], k});
        pts.push_back({t + 0.5 * h * nodes[static_cast<std::size_t>(k)], 5 + k});
        pts.push_back({t + 0.5 * h + 0.5 * h * nodes[static_cast<std::size_t>(k)], 10 + k});
      }
      pts.push_back({t + h, 15});
      std::sort(pts.begin(), pts.end());
      std::array<Point, 16> val;
      Point prev = w;
      bool good = true;
      for (const auto& [u, role] : pts) {
        bool step_ok = true;
        prev = follow(a + u * len, prev, step_ok);
        if (!step_ok) {
          good = false;
          break;
        }
        val[static_cast<std::size_t>(role)] = prev;
      }
      Point full(0, 0), halves(0, 0);
      if (good) {
        for (std::size_t k = 0; k < 5; ++k) {
          full += weights[k] * val[k];
          halves += 0.5 * weights[k] * (val[5 + k] + val[10 + k]);
        }
        full *= h * len;
        halves *= h * len;
        good = std::abs(full - halves) <= options.tolerance * std::max(1.0, std::abs(halves));
      }
      if (!good) {
        h *= 0.5;
        if (h < 1e-14) throw Error(ErrorKind::Reroute, "path integration step underflow; reroute the path");
        continue;
      }
      total += halves;
      w = val[15];
      t += h;
      h = std::min(0.25, 2.0 * h);
    }
  }
  return total.real();
}

double level_function(const HarmonicSystem& sys, LevelPair pair, Point z) {
  return shifted_value(sys, pair.first, z) - shifted_value(sys, pair.second, z);
}

Point level_gradient(const HarmonicSystem& sys, LevelPair pair, Point z) {
  return std::conj(branch_value(sys, pair.first, z) - branch_value(sys, pair.second, z));
}

std::vector<Point> level_critical_points(const HarmonicSystem& sys, LevelPair pair) {
  require_closed_form(sys, "level_critical_points");
  std::vector<Point> out;
  if (pair.first == 1 && pair.second >= 2) out.push_back(sys.branch_points[pair.second - 2]);
  if (pair.second == 1 && pair.first >= 2) out.push_back(sys.branch_points[pair.first - 2]);
  return out;
}

double LevelCurve::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

LevelCurve trace_level_curve(const HarmonicSystem& sys, LevelPair pair, Point seed, const TraceOptions& options) {
  const Tracer tr = make_tracer(sys, pair, options, seed);
  LevelCurve curve;
  curve.pair = pair;

  if (auto c = tr.known_critical_near(seed, 0.5 * options.step)) {
    curve.points = {*c};
    add_critical(curve, tr.saddle(*c));
    curve.stop_reasons = {"critical"};
    finish(sys, curve);
    return curve;
  }
  const auto corrected = tr.correct(seed);
  if (!corrected || std::abs(*corrected - seed) > options.step)
    throw invalid_input("trace seed is not on the level curve");
  const Point start = *corrected;
  const Point gr = tr.grad(start);
  if (std::abs(gr) < tr.grad_floor) {
    curve.points = {start};
    add_critical(curve, tr.saddle(start));
    curve.stop_reasons = {"critical"};
    finish(sys, curve);
    return curve;
  }
  const Point heading = Point(0, 1) * gr;

  auto forward = tr.march(start, heading, true);
  if (forward.reason == "closed") {
    curve.points = std::move(forward.points);
    curve.closed = true;
    curve.stop_reasons = {"closed"};
    finish(sys, curve);
    return curve;
  }
  auto backward = tr.march(start, -heading, true);
  curve.points.assign(backward.points.rbegin(), backward.points.rend());
  curve.points.insert(curve.points.end(), forward.points.begin() + 1, forward.points.end());
  curve.stop_reasons = {backward.reason, forward.reason};
  if (backward.critical) add_critical(curve, *backward.critical);
  if (forward.critical) add_critical(curve, *forward.critical);
  curve.closed = backward.critical && forward.critical && std::abs(backward.critical->z - forward.critical->z) < 1e-12;
  finish(sys, curve);
  return curve;
}

std::vector<LevelCurve> trace_from_critical_point(const HarmonicSystem& sys, LevelPair pair, Point critical,
                                                  const TraceOptions& options) {
  const Tracer tr = make_tracer(sys, pair, options, critical);
  const CriticalPoint cp = tr.saddle(critical);
  std::vector<LevelCurve> out;
  for (const auto& d : cp.directions) {
    LevelCurve curve;
    curve.pair = pair;
    add_critical(curve, cp);
    const auto first = tr.correct(critical + options.step * d);
    if (!first) {
      curve.points = {critical};
      curve.stop_reasons = {"stalled"};
      finish(sys, curve);
      out.push_back(std::move(curve));
      continue;
    }
    auto m = tr.march(*first, d, false, critical);
    curve.points.push_back(critical);
    curve.points.insert(curve.points.end(), m.points.begin(), m.points.end());
    curve.stop_reasons = {m.reason};
    if (m.critical) add_critical(curve, *m.critical);
    curve.closed = m.critical && std::abs(m.critical->z - critical) < 1e-12;
    finish(sys, curve);
    out.push_back(std::move(curve));
  }
  return out;
}

Point seed_on_segment(const HarmonicSystem& sys, LevelPair pair, Point a, Point b) {
  double ga = level_function(sys, pair, a);
  const double gb = level_function(sys, pair, b);
  if (!(ga * gb <= 0.0)) throw invalid_input("level function does not change sign on the segment");
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-16 * std::max(1.0, std::abs(a)); ++it) {
    const Point m = 0.5 * (a + b);
    const double gm = level_function(sys, pair, m);
    if (gm == 0.0) return m;
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

Point seed_on_ray(const HarmonicSystem& sys, LevelPair pair, Point origin, Point direction, double max_t) {
  const Point u = direction / std::abs(direction);
  constexpr int kSamples = 4000;
  std::optional<Point> prev;
  double gprev = 0.0;
  for (int k = 1; k <= kSamples; ++k) {
    const Point z = origin + (max_t * k / kSamples) * u;
    double gz;
    try {
      gz = level_function(sys, pair, z);
    } catch (const Error&) {
      prev.reset();
      continue;
    }
    if (!std::isfinite(gz)) {
      prev.reset();
      continue;
    }
    if (prev && (gz > 0) != (gprev > 0)) return seed_on_segment(sys, pair, *prev, z);
    prev = z;
    gprev = gz;
  }
  throw invalid_input("no level-curve crossing found along the ray");
}

std::string export_level_curve(const LevelCurve& curve) {
  std::ostringstream out;
  out << "# level " << curve.pair.first << ' ' << curve.pair.second << " closed=" << (curve.closed ? "true" : "false")
      << '\n';
  for (std::size_t k = 0; k < curve.points.size(); ++k)
    out << fmt(curve.points[k].real()) << ',' << fmt(curve.points[k].imag()) << ',' << fmt(curve.residuals[k]) << '\n';
  return out.str();
}

PsiValue psi_value(const HarmonicSystem& sys, Point z) {
  require_closed_form(sys, "psi_value");
  require_regular(z);
  std::vector<double> v(sys.branch_count());
  for (std::size_t i = 1; i <= sys.branch_count(); ++i) v[i - 1] = shifted_value(sys, i, z);
  const double top = *std::max_element(v.begin(), v.end());
  PsiValue out;
  out.value = top;
  bool found = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (top - v[i] <= kTieTolerance) {
      if (!found) {
        out.index = i + 1;
        found = true;
      } else {
        out.tie = true;
      }
    }
  }
  return out;
}

Point RegionGrid::center(int row, int col) const {
  const double dx = (box.xmax - box.xmin) / resolution;
  const double dy = (box.ymax - box.ymin) / resolution;
  return {box.xmin + (col + 0.5) * dx, box.ymin + (row + 0.5) * dy};
}

double RegionGrid::cell_diagonal() const {
  return std::hypot((box.xmax - box.xmin) / resolution, (box.ymax - box.ymin) / resolution);
}

std::vector<Point> RegionGrid::boundary_points() const {
  std::vector<Point> out;
  for (int r = 0; r < resolution; ++r)
    for (int c = 0; c < resolution; ++c)
      if (in_boundary(r, c)) out.push_back(center(r, c));
  return out;
}

std::vector<int> RegionGrid::distinct_labels() const {
  std::vector<int> out(labels.begin(), labels.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), 0), out.end());
  return out;
}

RegionGrid classify_regions(const HarmonicSystem& sys, const Box& box, int resolution) {
  require_closed_form(sys, "classify_regions");
  if (resolution < 2) throw invalid_input("region resolution must be at least 2");
  if (!(box.xmax > box.xmin && box.ymax > box.ymin)) throw invalid_input("region box is empty");
  RegionGrid grid;
  grid.box = box;
  grid.resolution = resolution;
  const std::size_t cells = static_cast<std::size_t>(resolution) * resolution;
  grid.labels.assign(cells, 0);
  grid.boundary.assign(cells, false);
  const double hx = 0.5 * (box.xmax - box.xmin) / resolution;
  const double hy = 0.5 * (box.ymax - box.ymin) / resolution;

  for (int r = 0; r < resolution; ++r)
    for (int c = 0; c < resolution; ++c) {
      const Point z = grid.center(r, c);
      const bool singular = std::abs(z.imag()) <= hy && (std::abs(z.real()) <= hx || std::abs(z.real() - 1.0) <= hx);
      if (singular) continue;
      grid.labels[static_cast<std::size_t>(r) * resolution + c] = static_cast<int>(psi_value(sys, z).index);
    }

  const bool cut = sys.has_cut();
  auto mark = [&](int r1, int c1, int r2, int c2) {
    const int a = grid.label(r1, c1), b = grid.label(r2, c2);
    if (a == 0 || b == 0 || a == b) return;
    if (cut && r1 != r2) {
      const Point za = grid.center(r1, c1), zb = grid.center(r2, c2);
      if (za.real() < 0 && (za.imag() > 0) != (zb.imag() > 0)) return;
    }
    grid.boundary[static_cast<std::size_t>(r1) * resolution + c1] = true;
    grid.boundary[static_cast<std::size_t>(r2) * resolution + c2] = true;
  };
  for (int r = 0; r < resolution; ++r)
    for (int c = 0; c < resolution; ++c) {
      if (c + 1 < resolution) mark(r, c, r, c + 1);
      if (r + 1 < resolution) mark(r, c, r + 1, c);
    }
  grid.label_count = grid.distinct_labels().size();
  return grid;
}

std::vector<bool> domain_mask(const RegionGrid& grid, bool largest_only) {
  const int n = grid.resolution;
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<int> component(cells, -1);
  std::vector<std::size_t> sizes;
  const int dr[4] = {1, -1, 0, 0}, dc[4] = {0, 0, 1, -1};
  for (std::size_t start = 0; start < cells; ++start) {
    if (grid.labels[start] < 2 || component[start] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t count = 0;
    std::deque<std::size_t> queue{start};
    component[start] = id;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      ++count;
      const int r = static_cast<int>(cur / n), c = static_cast<int>(cur % n);
      for (int k = 0; k < 4; ++k) {
        const int rr = r + dr[k], cc = c + dc[k];
        if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
        const std::size_t nb = static_cast<std::size_t>(rr) * n + cc;
        if (grid.labels[nb] >= 2 && component[nb] < 0) {
          component[nb] = id;
          queue.push_back(nb);
        }
      }
    }
    sizes.push_back(count);
  }
  std::vector<bool> mask(cells, false);
  if (sizes.empty()) return mask;
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (std::size_t i = 0; i < cells; ++i)
    if (component[i] >= 0 && (!largest_only || component[i] == keep)) mask[i] = true;
  std::vector<bool> out = mask;
  for (std::size_t i = 0; i < cells; ++i) {
    if (mask[i] || !grid.boundary[i]) continue;
    const int r = static_cast<int>(i / n), c = static_cast<int>(i % n);
    for (int k = 0; k < 4; ++k) {
      const int rr = r + dr[k], cc = c + dc[k];
      if (rr >= 0 && rr < n && cc >= 0 && cc < n && mask[static_cast<std::size_t>(rr) * n + cc]) out[i] = true;
    }
  }
  return out;
}

std::string export_region_raster(const RegionGrid& grid) {
  nlohmann::ordered_json header;
  header["box"] = {grid.box.xmin, grid.box.xmax, grid.box.ymin, grid.box.ymax};
  header["resolution"] = grid.resolution;
  nlohmann::ordered_json legend;
  legend["."] = "singular cell (contains 0 or 1)";
  legend["1"] = "H_1";
  const auto present = grid.distinct_labels();
  const int top = present.empty() ? 1 : present.back();
  for (int i = 2; i <= top; ++i) legend[std::to_string(i)] = "H~_" + std::to_string(i);
  header["legend"] = legend;
  header["row_order"] = "top row is ymax";
  std::ostringstream out;
  out << header.dump() << '\n';
  for (int r = grid.resolution - 1; r >= 0; --r) {
    for (int c = 0; c < grid.resolution; ++c) {
      const int l = grid.label(r, c);
      out << (l == 0 ? '.' : l <= 9 ? static_cast<char>('0' + l) : static_cast<char>('a' + (l - 10)));
    }
    out << '\n';
  }
  return out.str();
}

std::string export_boundary(const RegionGrid& grid) {
  std::ostringstream out;
  out << "x,y,label\n";
  for (int r = 0; r < grid.resolution; ++r)
    for (int c = 0; c < grid.resolution; ++c)
      if (grid.in_boundary(r, c)) {
        const Point z = grid.center(r, c);
        out << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << grid.label(r, c) << '\n';
      }
  return out.str();
}

LevelCurve import_level_curve(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  LevelCurve curve;
  if (!std::getline(in, line) || line.rfind("# level ", 0) != 0)
    throw invalid_input("level curve file: missing '# level i j' header");
  std::istringstream header(line.substr(8));
  std::string closed;
  if (!(header >> curve.pair.first >> curve.pair.second >> closed))
    throw invalid_input("level curve file: malformed header '" + line + "'");
  curve.closed = closed == "closed=true";
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double x = 0, y = 0, r = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &r) != 3)
      throw invalid_input("level curve file: malformed row '" + line + "'");
    curve.points.emplace_back(x, y);
    curve.residuals.push_back(r);
  }
  return curve;
}

RegionGrid import_region_raster(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw invalid_input("region raster: empty file");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input(std::string("region raster: bad header: ") + e.what());
  }
  if (!header.contains("box") || !header.contains("resolution") || header["box"].size() != 4)
    throw invalid_input("region raster: header needs box and resolution");
  RegionGrid grid;
  const auto& b = header["box"];
  grid.box = Box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  grid.resolution = header["resolution"].get<int>();
  const int res = grid.resolution;
  if (res <= 0) throw invalid_input("region raster: resolution must be positive");
  grid.labels.assign(static_cast<std::size_t>(res) * res, 0);
  for (int r = res - 1; r >= 0; --r) {
    if (!std::getline(in, line) || static_cast<int>(line.size()) != res)
      throw invalid_input("region raster: expected " + std::to_string(res) + " rows of " + std::to_string(res) + " cells");
    for (int c = 0; c < res; ++c) {
      const char ch = line[c];
      int l = 0;
      if (ch >= '1' && ch <= '9') l = ch - '0';
      else if (ch >= 'a' && ch <= 'z') l = ch - 'a' + 10;
      else if (ch != '.') throw invalid_input(std::string("region raster: unknown cell '") + ch + "'");
      grid.labels[static_cast<std::size_t>(r) * res + c] = l;
    }
  }
  grid.boundary.assign(grid.labels.size(), false);
  for (int r = 0; r < res; ++r)
    for (int c = 0; c < res; ++c) {
      const int l = grid.label(r, c);
      if (l == 0) continue;
      auto differs = [&](int rr, int cc) {
        return rr >= 0 && rr < res && cc >= 0 && cc < res && grid.label(rr, cc) != 0 && grid.label(rr, cc) != l;
      };
      if (differs(r - 1, c) || differs(r + 1, c) || differs(r, c - 1) || differs(r, c + 1))
        grid.boundary[static_cast<std::size_t>(r) * res + c] = true;
    }
  grid.label_count = grid.distinct_labels().size();
  return grid;
}

}  // namespace hypzero
