#include "hypzero/roots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hypzero/errors.hpp"

namespace hypzero {

namespace {

using CoeffSpan = std::span<const BigComplex>;

// acc = acc * z + add
void mul_add(BigComplex& acc, const BigComplex& z, const BigComplex& add, Real& t1, Real& t2) {
  mpfr_fmms(t1.get(), acc.re.get(), z.re.get(), acc.im.get(), z.im.get(), MPFR_RNDN);
  mpfr_fmma(t2.get(), acc.re.get(), z.im.get(), acc.im.get(), z.re.get(), MPFR_RNDN);
  mpfr_add(acc.re.get(), t1.get(), add.re.get(), MPFR_RNDN);
  mpfr_add(acc.im.get(), t2.get(), add.im.get(), MPFR_RNDN);
}

struct Workspace {
  explicit Workspace(int prec) : p(prec), d(prec), t1(prec), t2(prec), t3(prec) {}
  BigComplex p, d;
  Real t1, t2, t3;
};

void horner(CoeffSpan c, const BigComplex& z, Workspace& w) {
  const std::size_t n = c.size() - 1;
  mpfr_set(w.p.re.get(), c[n].re.get(), MPFR_RNDN);
  mpfr_set(w.p.im.get(), c[n].im.get(), MPFR_RNDN);
  mpfr_set_zero(w.d.re.get(), 1);
  mpfr_set_zero(w.d.im.get(), 1);
  for (std::size_t k = n; k-- > 0;) {
    mul_add(w.d, z, w.p, w.t1, w.t2);
    mul_add(w.p, z, c[k], w.t1, w.t2);
  }
}

// max_k |c_k| |z|^k (or the sum) at modest precision; only used as a scale.
Real magnitude_scale(std::span<const Real> abs_c, const BigComplex& z, bool use_max) {
  BigComplex z64 = z;
  z64.set_precision(64);
  const Real r = z64.abs();
  Real power(1L, 64);
  Real acc(64);
  for (const auto& a : abs_c) {
    Real term = a * power;
    if (use_max) {
      if (term > acc) acc = std::move(term);
    } else {
      acc += term;
    }
    power *= r;
  }
  return acc;
}

std::vector<Real> abs_coeffs(CoeffSpan c) {
  std::vector<Real> out;
  out.reserve(c.size());
  for (const auto& x : c) {
    BigComplex y = x;
    y.set_precision(64);
    out.push_back(y.abs());
  }
  return out;
}

Real abs64(const BigComplex& z) {
  BigComplex y = z;
  y.set_precision(64);
  return y.abs();
}

std::vector<BigComplex> circle_seeds(CoeffSpan c, int prec) {
  const std::size_t n = c.size() - 1;
  // Centre at the root centroid, radius the geometric mean distance from it.
  BigComplex centre = -(c[n - 1] / c[n]);
  centre /= BigComplex(Real(static_cast<long>(n), prec), Real(prec));
  Workspace w(prec);
  horner(c, centre, w);
  double radius = 1.0;
  const Real pc = abs64(w.p);
  const Real lead = abs64(c[n]);
  if (!pc.is_zero()) {
    const double lg = (log(pc) - log(lead)).to_double() / static_cast<double>(n);
    radius = std::exp(lg);
  }
  if (!std::isfinite(radius) || radius <= 0.0) radius = 1.0;
  std::vector<BigComplex> seeds;
  seeds.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    BigComplex s(std::polar(radius, theta), prec);
    s += centre;
    seeds.push_back(std::move(s));
  }
  return seeds;
}

std::vector<BigComplex> companion_seeds(CoeffSpan c, int prec) {
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  long top = std::numeric_limits<long>::min();
  for (const auto& x : c) {
    top = std::max({top, x.re.is_zero() ? top : x.re.exponent(), x.im.is_zero() ? top : x.im.exponent()});
  }
  // Scaled conversion: c_k * 2^-top keeps every entry representable.
  std::vector<std::complex<double>> d;
  for (const auto& x : c) {
    Real re = x.re * Real::pow2(-top, 64);
    Real im = x.im * Real::pow2(-top, 64);
    d.emplace_back(re.to_double(), im.to_double());
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -d[static_cast<std::size_t>(i)] / d.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<BigComplex> seeds;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::complex<double> v = solver.eigenvalues()(i);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) v = std::polar(1.0, 0.3 + static_cast<double>(i));
    // Break exact coincidences so the Aberth repulsion term stays finite.
    v += std::complex<double>(1e-12 * static_cast<double>(i), 1e-12);
    seeds.emplace_back(v, prec);
  }
  return seeds;
}

struct AberthRun {
  std::vector<BigComplex> roots;
  std::vector<double> trace;
  bool converged = false;
};

// Synchronous sweeps: every correction in a sweep is computed from the previous sweep's roots.
AberthRun aberth(CoeffSpan c, std::vector<BigComplex> z, int prec, int max_sweeps) {
  const std::size_t n = c.size() - 1;
  const std::vector<Real> abs_c = abs_coeffs(c);
  const Real step_tol = Real::pow2(-(prec - 6), 64);
  const Real residual_floor = Real::pow2(-(prec - 8), 64) * Real(static_cast<long>(n + 1), 64);

  std::vector<bool> frozen(n, false);
  std::vector<BigComplex> corr(n, BigComplex(prec));
  Workspace w(prec);
  BigComplex sum(prec), diff(prec), ratio(prec), denom(prec);
  Real nrm(prec);
  const BigComplex one(Real(1L, prec), Real(prec));

  AberthRun run;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      horner(c, z[i], w);
      const Real zabs = abs64(z[i]);
      // At the rounding floor of the evaluation nothing more can be resolved.
      if (w.p.is_zero() || abs64(w.p) <= residual_floor * magnitude_scale(abs_c, z[i], false)) {
        frozen[i] = true;
        mpfr_set_zero(corr[i].re.get(), 1);
        mpfr_set_zero(corr[i].im.get(), 1);
        continue;
      }
      if (w.d.is_zero()) {
        // Stationary point of p: nudge off it.
        corr[i] = BigComplex(std::complex<double>(1e-3, 1e-3) * (1.0 + zabs.to_double()), prec);
        continue;
      }
      ratio = w.p / w.d;
      mpfr_set_zero(sum.re.get(), 1);
      mpfr_set_zero(sum.im.get(), 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        mpfr_sub(diff.re.get(), z[i].re.get(), z[j].re.get(), MPFR_RNDN);
        mpfr_sub(diff.im.get(), z[i].im.get(), z[j].im.get(), MPFR_RNDN);
        mpfr_fmma(nrm.get(), diff.re.get(), diff.re.get(), diff.im.get(), diff.im.get(), MPFR_RNDN);
        if (nrm.is_zero()) continue;
        mpfr_div(w.t1.get(), diff.re.get(), nrm.get(), MPFR_RNDN);
        mpfr_div(w.t2.get(), diff.im.get(), nrm.get(), MPFR_RNDN);
        mpfr_add(sum.re.get(), sum.re.get(), w.t1.get(), MPFR_RNDN);
        mpfr_sub(sum.im.get(), sum.im.get(), w.t2.get(), MPFR_RNDN);
      }
      denom = one - ratio * sum;
      corr[i] = denom.is_zero() ? ratio : ratio / denom;
      const Real cabs = abs64(corr[i]);
      if (cabs <= step_tol * zabs) frozen[i] = true;
      if (!cabs.is_zero()) {
        const double rel = static_cast<double>(cabs.exponent() - (zabs.is_zero() ? 0 : zabs.exponent()));
        worst = std::max(worst, rel);
      }
    }
    for (std::size_t i = 0; i < n; ++i) z[i] -= corr[i];
    for (auto& x : corr) {
      mpfr_set_zero(x.re.get(), 1);
      mpfr_set_zero(x.im.get(), 1);
    }
    run.trace.push_back(worst);
    if (std::all_of(frozen.begin(), frozen.end(), [](bool f) { return f; })) {
      run.converged = true;
      break;
    }
  }
  run.roots = std::move(z);
  return run;
}

// One synchronous Newton step per root, kept only where it lowers the residual.
void newton_polish(CoeffSpan c, std::vector<BigComplex>& z, int prec) {
  Workspace w(prec);
  std::vector<BigComplex> next = z;
  for (std::size_t i = 0; i < z.size(); ++i) {
    horner(c, z[i], w);
    if (w.d.is_zero() || w.p.is_zero()) continue;
    BigComplex candidate = z[i] - w.p / w.d;
    if (relative_residual(c, candidate) < relative_residual(c, z[i])) next[i] = std::move(candidate);
  }
  z = std::move(next);
}

std::vector<BigComplex> to_mp(std::span<const ComplexRational> coeffs, int prec) {
  std::vector<BigComplex> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.emplace_back(c, prec);
  return out;
}

std::vector<std::size_t> sort_order(const std::vector<BigComplex>& roots) {
  std::vector<std::size_t> idx(roots.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return lex_less(roots[a], roots[b]); });
  return idx;
}

std::vector<std::vector<std::size_t>> find_clusters(const std::vector<BigComplex>& roots, const Real& radius) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const Real r2 = radius * radius;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((roots[i] - roots[j]).norm() < r2) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& g : groups) {
    if (g.size() > 1) out.push_back(std::move(g));
  }
  return out;
}

// First-order bound on |dz| / max(1, |z|) from rounding every coefficient and every Horner step:
// (n + 1) 2^-prec sum_k |c_k| |z|^k / |p'(z)|. Infinite at a multiple root.
Real forward_error_bound(CoeffSpan c, const BigComplex& z, int prec) {
  const Real sum = magnitude_scale(abs_coeffs(c), z, false);
  const Real deriv = abs64(evaluate_with_derivative(c, z).second);
  Real bound = sum * Real::pow2(-prec, 64) * Real(static_cast<long>(c.size()), 64);
  if (deriv.is_zero()) {
    mpfr_set_inf(bound.get(), 1);
    return bound;
  }
  bound /= deriv;
  const Real zabs = abs64(z);
  if (zabs > Real(1L, 64)) bound /= zabs;
  return bound;
}

// Roots of a trimmed polynomial with c[0] != 0 and degree >= 1.
AberthRun solve_nonzero_roots(CoeffSpan c, int prec, int max_sweeps) {
  const std::size_t n = c.size() - 1;
  if (n == 1) {
    AberthRun run;
    run.roots.push_back(-(c[0] / c[1]));
    run.converged = true;
    return run;
  }
  AberthRun run = aberth(c, circle_seeds(c, prec), prec, max_sweeps);
  if (!run.converged) {
    AberthRun retry = aberth(c, companion_seeds(c, prec), prec, max_sweeps);
    retry.trace.insert(retry.trace.begin(), run.trace.begin(), run.trace.end());
    run = std::move(retry);
  }
  if (run.converged) newton_polish(c, run.roots, prec);
  return run;
}

}  // namespace

Real RootCountingMeasure::cluster_radius() const { return Real::pow2(-(precision_bits / 8), 64); }

std::vector<std::complex<double>> RootCountingMeasure::as_complex() const {
  std::vector<std::complex<double>> out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(r.to_complex());
  return out;
}

std::pair<BigComplex, BigComplex> evaluate_with_derivative(std::span<const BigComplex> coeffs, const BigComplex& z) {
  if (coeffs.empty()) return {BigComplex(z.precision()), BigComplex(z.precision())};
  int prec = z.precision();
  for (const auto& c : coeffs) prec = std::max(prec, c.precision());
  Workspace w(prec);
  horner(coeffs, z, w);
  return {w.p, w.d};
}

Real relative_residual(std::span<const BigComplex> coeffs, const BigComplex& z) {
  const Real scale = magnitude_scale(abs_coeffs(coeffs), z, true);
  const Real value = abs64(evaluate_with_derivative(coeffs, z).first);
  if (scale.is_zero()) return value;
  return value / scale;
}

std::vector<BigComplex> polynomial_roots(std::span<const BigComplex> coeffs, int precision_bits) {
  std::size_t hi = coeffs.size();
  while (hi > 0 && coeffs[hi - 1].is_zero()) --hi;
  if (hi == 0) throw invalid_input("cannot find the roots of the zero polynomial");
  std::size_t lo = 0;
  while (coeffs[lo].is_zero()) ++lo;
  std::vector<BigComplex> c(coeffs.begin() + static_cast<std::ptrdiff_t>(lo), coeffs.begin() + static_cast<std::ptrdiff_t>(hi));
  for (auto& x : c) x.set_precision(precision_bits);
  std::vector<BigComplex> roots(lo, BigComplex(precision_bits));
  if (c.size() > 1) {
    AberthRun run = solve_nonzero_roots(c, precision_bits, RootOptions{}.max_sweeps);
    for (auto& r : run.roots) roots.push_back(std::move(r));
  }
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

RootCountingMeasure find_roots(std::span<const ComplexRational> coeffs, const RootOptions& options) {
  if (options.precision_bits < 64) throw invalid_input("precision_bits must be at least 64");
  const int top_degree = poly::degree(coeffs);
  if (top_degree < 0) throw invalid_input("cannot find the roots of the zero polynomial");
  std::size_t lo = 0;
  while (coeffs[lo].is_zero()) ++lo;
  const std::span<const ComplexRational> core = coeffs.subspan(lo, static_cast<std::size_t>(top_degree) + 1 - lo);

  std::vector<double> history;
  int prec = options.precision_bits;
  while (true) {
    const std::vector<BigComplex> c = to_mp(core, prec);
    std::vector<BigComplex> found;
    bool converged = true;
    std::vector<double> trace;
    if (c.size() > 1) {
      AberthRun run = solve_nonzero_roots(c, prec, options.max_sweeps);
      converged = run.converged;
      trace = std::move(run.trace);
      found = std::move(run.roots);
    }
    history.insert(history.end(), trace.begin(), trace.end());

    RootCountingMeasure m;
    m.precision_bits = prec;
    m.certification_threshold = Real::pow2(-(prec / 4), 64);
    m.sweep_trace = trace;
    for (std::size_t k = 0; k < lo; ++k) found.emplace_back(prec);
    const std::vector<BigComplex> full = to_mp(coeffs.first(static_cast<std::size_t>(top_degree) + 1), prec);
    std::vector<Real> residuals;
    std::vector<Real> errors;
    bool certified = converged;
    for (const auto& r : found) {
      if (lo > 0 && r.is_zero()) {
        // split-off zero roots are exact
        residuals.emplace_back(64);
        errors.emplace_back(64);
        continue;
      }
      residuals.push_back(relative_residual(full, r));
      errors.push_back(forward_error_bound(full, r, prec));
      if (!(residuals.back() < m.certification_threshold)) certified = false;
      if (!(errors.back() < m.certification_threshold)) certified = false;
    }
    if (certified) {
      const auto order = sort_order(found);
      for (std::size_t i : order) {
        m.roots.push_back(found[i]);
        m.residual_bounds.push_back(residuals[i]);
        m.error_bounds.push_back(errors[i]);
      }
      m.clusters = find_clusters(m.roots, m.cluster_radius());
      return m;
    }
    if (options.auto_refine && prec * 2 <= options.max_precision_bits) {
      prec *= 2;
      continue;
    }
    throw ConvergenceError("root finding did not certify at " + std::to_string(prec) + " bits (degree " +
                               std::to_string(top_degree) + "); retry at a higher precision",
                           std::move(history), prec);
  }
}

RootCountingMeasure find_roots(const HypPolynomial& p, const RootOptions& options) { return find_roots(p.coeffs, options); }

RootCountingMeasure find_roots(const HypPolynomial& p, int precision_bits) {
  RootOptions options;
  options.precision_bits = precision_bits;
  return find_roots(p, options);
}

namespace {

void check_pole(const RootCountingMeasure& m, const BigComplex& z) {
  const Real r = m.cluster_radius();
  const Real r2 = r * r;
  for (std::size_t i = 0; i < m.roots.size(); ++i) {
    if ((z - m.roots[i]).norm() < r2) {
      throw Error(ErrorKind::Pole, "evaluation point coincides with root " + std::to_string(i));
    }
  }
}

}  // namespace

BigComplex cauchy_transform_at(const RootCountingMeasure& m, const BigComplex& z) {
  if (m.roots.empty()) throw invalid_input("empty root-counting measure");
  check_pole(m, z);
  const int prec = std::max(z.precision(), m.precision_bits);
  const BigComplex one(Real(1L, prec), Real(prec));
  BigComplex acc(prec);
  for (const auto& r : m.roots) acc += one / (z - r);
  const Real n(static_cast<long>(m.roots.size()), prec);
  acc.re /= n;
  acc.im /= n;
  return acc;
}

Real log_potential_at(const RootCountingMeasure& m, const BigComplex& z) {
  if (m.roots.empty()) throw invalid_input("empty root-counting measure");
  check_pole(m, z);
  const int prec = std::max(z.precision(), m.precision_bits);
  Real acc(prec);
  // log|z - zeta| = log(|z - zeta|^2) / 2
  for (const auto& r : m.roots) acc += log((z - r).norm());
  return acc / Real(static_cast<long>(2 * m.roots.size()), prec);
}

VietaReport vieta_check(std::span<const ComplexRational> coeffs, const RootCountingMeasure& m) {
  const int deg = poly::degree(coeffs);
  if (deg < 1 || static_cast<std::size_t>(deg) != m.roots.size()) {
    throw invalid_input("vieta_check: degree " + std::to_string(deg) + " does not match " +
                        std::to_string(m.roots.size()) + " roots");
  }
  const int prec = m.precision_bits;
  const auto n = static_cast<std::size_t>(deg);
  const ComplexRational es = -(coeffs[n - 1] / coeffs[n]);
  ComplexRational ep = coeffs[0] / coeffs[n];
  if (n % 2 == 1) ep = -ep;

  VietaReport r{BigComplex(prec), BigComplex(es, prec), BigComplex(Real(1L, prec), Real(prec)), BigComplex(ep, prec),
                Real(prec), Real(prec), Real(prec)};
  Real abs_sum(prec);
  for (const auto& z : m.roots) {
    r.sum += z;
    r.product *= z;
    abs_sum += z.abs();
  }
  const Real sum_scale = max(r.expected_sum.abs(), abs_sum);
  r.sum_deviation = (r.sum - r.expected_sum).abs();
  if (!sum_scale.is_zero()) r.sum_deviation /= sum_scale;
  const Real prod_scale = r.expected_product.abs();
  r.product_deviation = (r.product - r.expected_product).abs();
  if (!prod_scale.is_zero()) r.product_deviation /= prod_scale;
  r.max_deviation = max(r.sum_deviation, r.product_deviation);
  return r;
}

VietaReport vieta_check(const HypPolynomial& p, const RootCountingMeasure& m) { return vieta_check(p.coeffs, m); }

std::string export_roots(const RootCountingMeasure& m, const std::string& schedule_hash) {
  const int digits = Real::decimal_digits(m.precision_bits);
  std::string out = "# hypzero-roots n=" + std::to_string(m.roots.size()) +
                    " precision_bits=" + std::to_string(m.precision_bits) + " schedule_hash=" + schedule_hash + "\n";
  for (std::size_t i = 0; i < m.roots.size(); ++i) {
    out += m.roots[i].re.to_string(digits);
    out += ' ';
    out += m.roots[i].im.to_string(digits);
    out += ' ';
    out += m.residual_bounds[i].to_string(6);
    out += '\n';
  }
  return out;
}

RootFile import_roots(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# hypzero-roots", 0) != 0) {
    throw invalid_input("root file: missing '# hypzero-roots' header");
  }
  RootFile file;
  long count = -1;
  std::istringstream header(line.substr(15));
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "n") count = std::stol(value);
      if (key == "precision_bits") file.measure.precision_bits = std::stoi(value);
    } catch (const std::exception&) {
      throw invalid_input("root file: bad header value '" + token + "'");
    }
    if (key == "schedule_hash") file.schedule_hash = value;
  }
  const int prec = file.measure.precision_bits;
  if (count < 0 || prec < 64) throw invalid_input("root file: header needs n and precision_bits >= 64");
  file.measure.certification_threshold = Real::pow2(-(prec / 4), 64);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string re, im, res;
    if (!(row >> re >> im >> res)) throw invalid_input("root file: malformed row '" + line + "'");
    file.measure.roots.emplace_back(Real::parse(re, prec), Real::parse(im, prec));
    file.measure.residual_bounds.push_back(Real::parse(res, 64));
  }
  if (static_cast<long>(file.measure.roots.size()) != count) {
    throw invalid_input("root file: header says n=" + std::to_string(count) + " but " +
                        std::to_string(file.measure.roots.size()) + " rows follow");
  }
  file.measure.clusters = find_clusters(file.measure.roots, file.measure.cluster_radius());
  return file;
}

}  // namespace hypzero
