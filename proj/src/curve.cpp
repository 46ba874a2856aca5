#include "hypzero/curve.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hypzero/errors.hpp"
#include "hypzero/hyp_poly.hpp"
#include "hypzero/roots.hpp"

namespace hypzero {

namespace {

using Matrix = std::vector<std::vector<ComplexRational>>;

// Exact determinant by fraction-field Gaussian elimination.
ComplexRational determinant(Matrix a) {
  const std::size_t n = a.size();
  ComplexRational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return ComplexRational(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    const ComplexRational inv = ComplexRational(1) / a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      const ComplexRational f = a[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

// Sylvester matrix of f (degree df) and g (degree dg), coefficients stored low to high,
// both padded to their formal degrees.
Matrix sylvester(const std::vector<ComplexRational>& f, const std::vector<ComplexRational>& g) {
  const std::size_t df = f.size() - 1;
  const std::size_t dg = g.size() - 1;
  const std::size_t n = df + dg;
  Matrix m(n, std::vector<ComplexRational>(n, ComplexRational(0)));
  for (std::size_t r = 0; r < dg; ++r)
    for (std::size_t k = 0; k <= df; ++k) m[r][r + (df - k)] = f[k];
  for (std::size_t r = 0; r < df; ++r)
    for (std::size_t k = 0; k <= dg; ++k) m[dg + r][r + (dg - k)] = g[k];
  return m;
}

// Newton divided differences on the nodes 0, 1, ..., then expansion into the monomial basis.
ExactPoly interpolate(const std::vector<ComplexRational>& values) {
  const std::size_t n = values.size();
  std::vector<ComplexRational> dd = values;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / ComplexRational(static_cast<long>(level));
  ExactPoly out{dd[n - 1]};
  for (std::size_t i = n - 1; i-- > 0;) {
    const ExactPoly factor{ComplexRational(-static_cast<long>(i)), ComplexRational(1)};
    out = poly::add(poly::mul(out, factor), ExactPoly{dd[i]});
  }
  poly::trim(out);
  return out;
}

ExactPoly divide_out_root(ExactPoly p, const ComplexRational& root) {
  const ExactPoly lin{-root, ComplexRational(1)};
  while (poly::degree(p) > 0 && poly::evaluate(p, root).is_zero()) p = poly::divmod(p, lin).quotient;
  return p;
}

double nearest(const std::vector<BigComplex>& pts, const BigComplex& z) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::min(best, (p - z).abs().to_double());
  return best;
}

}  // namespace

ExactPoly BivariateCurve::w_coefficient(std::size_t k) const {
  ExactPoly out;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (k < terms[j].size()) {
      if (out.size() <= j) out.resize(j + 1, ComplexRational(0));
      out[j] = terms[j][k];
    }
  }
  poly::trim(out);
  return out;
}

ComplexRational BivariateCurve::evaluate(const ComplexRational& z, const ComplexRational& w) const {
  ComplexRational acc(0);
  ComplexRational zj(1);
  for (const auto& row : terms) {
    ComplexRational wk(1);
    for (const auto& c : row) {
      if (!c.is_zero()) acc += c * zj * wk;
      wk *= w;
    }
    zj *= z;
  }
  return acc;
}

ComplexRational BivariateCurve::evaluate_structured(const ComplexRational& z, const ComplexRational& w) const {
  const ComplexRational u = z * w;
  return poly::evaluate(m_poly, u) - w * poly::evaluate(n_poly, u);
}

std::vector<BigComplex> BivariateCurve::w_polynomial_at(const BigComplex& z) const {
  const int prec = z.precision();
  const std::size_t d = w_degree();
  std::vector<BigComplex> out;
  out.reserve(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    BigComplex acc(prec);
    for (std::size_t j = terms.size(); j-- > 0;) {
      acc = acc * z + BigComplex(terms[j][k], prec);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::string BivariateCurve::export_terms() const {
  std::ostringstream out;
  for (std::size_t j = 0; j < terms.size(); ++j)
    for (std::size_t k = 0; k < terms[j].size(); ++k)
      if (!terms[j][k].is_zero())
        out << j << ' ' << k << ' ' << rational_to_string(terms[j][k].re()) << ' '
            << rational_to_string(terms[j][k].im()) << '\n';
  return out.str();
}

BivariateCurve build_curve(const ParameterSchedule& schedule) {
  schedule.validate();
  BivariateCurve curve;
  curve.alphas = schedule.alphas;
  curve.betas = schedule.betas;
  for (std::size_t i = 0; i < curve.alphas.size(); ++i)
    if (curve.alphas[i].is_zero())
      throw invalid_input("alpha_" + std::to_string(i + 1) + " = 0: the curve is not defined");
  curve.m_poly = poly::from_shifted_roots(curve.alphas);
  curve.n_poly = poly::from_shifted_roots(curve.betas);
  const std::size_t d = curve.w_degree();
  curve.terms.assign(d + 1, std::vector<ComplexRational>(d + 1, ComplexRational(0)));
  for (std::size_t k = 0; k < curve.m_poly.size(); ++k) curve.terms[k][k] += curve.m_poly[k];
  for (std::size_t k = 0; k < curve.n_poly.size(); ++k) curve.terms[k][k + 1] -= curve.n_poly[k];
  return curve;
}

std::vector<BigComplex> branches_at(const BivariateCurve& curve, const BigComplex& z, int precision_bits) {
  if (z.is_zero()) throw invalid_input("branches_at: z = 0 is a zero of the leading coefficient z^B (z - 1)");
  if (z.im.is_zero() && z.re == Real(1L, 64))
    throw invalid_input("branches_at: z = 1 is a zero of the leading coefficient z^B (z - 1)");
  BigComplex zz = z;
  zz.set_precision(precision_bits);
  const auto coeffs = curve.w_polynomial_at(zz);
  if (coeffs.back().is_zero()) throw Error(ErrorKind::Pole, "branches_at: leading coefficient vanishes numerically");
  return polynomial_roots(coeffs, precision_bits);
}

ExactPoly w_discriminant(const BivariateCurve& curve) {
  const std::size_t d = curve.w_degree();
  const std::size_t bound = (2 * d - 1) * d;
  std::vector<ExactPoly> fk(d + 1);
  for (std::size_t k = 0; k <= d; ++k) fk[k] = curve.w_coefficient(k);

  std::vector<ComplexRational> values;
  values.reserve(bound + 1);
  for (std::size_t t = 0; t <= bound; ++t) {
    const ComplexRational z(static_cast<long>(t));
    std::vector<ComplexRational> f(d + 1), g(d);
    for (std::size_t k = 0; k <= d; ++k) f[k] = poly::evaluate(fk[k], z);
    for (std::size_t k = 1; k <= d; ++k) g[k - 1] = f[k] * ComplexRational(static_cast<long>(k));
    values.push_back(determinant(sylvester(f, g)));
  }
  ExactPoly res = interpolate(values);
  if (res.empty()) return res;
  auto [q, r] = poly::divmod(res, fk[d]);
  if (!poly::is_zero(r)) throw Error(ErrorKind::NonConvergence, "w_discriminant: resultant not divisible by the leading coefficient");
  if ((d * (d - 1) / 2) % 2 == 1) q = poly::scale(q, ComplexRational(-1));
  return q;
}

BranchPointSet branch_points(const BivariateCurve& curve, const ParameterSchedule& schedule, int precision_bits) {
  BranchPointSet out;
  out.degenerate = schedule.is_degenerate();
  out.diagnostic = is_general_type(schedule).diagnostic;
  out.discriminant = w_discriminant(curve);
  if (poly::is_zero(out.discriminant))
    throw invalid_input("the curve is not reduced: its w-discriminant vanishes identically");

  ExactPoly reduced = poly::squarefree_part(out.discriminant);
  reduced = divide_out_root(std::move(reduced), ComplexRational(0));
  reduced = divide_out_root(std::move(reduced), ComplexRational(1));
  if (poly::degree(reduced) > 0) {
    RootOptions opts;
    opts.precision_bits = precision_bits;
    out.discriminant_roots = find_roots(reduced, opts).roots;
  }

  if (out.degenerate) {
    for (std::size_t i = 1; i < curve.alphas.size(); ++i) {
      const ComplexRational& a = curve.alphas[i];
      const ComplexRational denom = a + ComplexRational(1);
      if (denom.is_zero()) continue;
      const ComplexRational p = a / denom;
      bool seen = false;
      for (const auto& q : out.exact_points) seen = seen || q == p;
      if (!seen) out.exact_points.push_back(p);
    }
    for (const auto& p : out.exact_points) {
      out.points.emplace_back(p, precision_bits);
      out.cross_check_distance = std::max(out.cross_check_distance, nearest(out.discriminant_roots, out.points.back()));
    }
  } else {
    out.points = out.discriminant_roots;
  }
  return out;
}

Prop3Report verify_prop3(const ParameterSchedule& schedule) {
  if (!schedule.is_degenerate())
    throw invalid_input("verify_prop3 needs beta_j = alpha_{j+1} for every j");
  const BivariateCurve curve = build_curve(schedule);
  const std::size_t d = curve.w_degree();

  auto substitute = [&](const ExactPoly& num, const ExactPoly& den) {
    ExactPoly acc;
    for (std::size_t j = 0; j < curve.terms.size(); ++j) {
      ExactPoly zj(j + 1, ComplexRational(0));
      zj[j] = ComplexRational(1);
      for (std::size_t k = 0; k <= d; ++k) {
        if (curve.terms[j][k].is_zero()) continue;
        ExactPoly t = poly::mul(poly::power(num, static_cast<unsigned>(k)), poly::power(den, static_cast<unsigned>(d - k)));
        acc = poly::add(acc, poly::scale(poly::mul(zj, t), curve.terms[j][k]));
      }
    }
    poly::trim(acc);
    return acc;
  };

  Prop3Report report;
  report.branches.push_back({"w = 1/(z-1)", substitute(ExactPoly{ComplexRational(1)}, ExactPoly{ComplexRational(-1), ComplexRational(1)})});
  for (std::size_t i = 1; i < d; ++i) {
    report.branches.push_back({"w = -alpha_" + std::to_string(i + 1) + "/z",
                               substitute(ExactPoly{-curve.alphas[i]}, ExactPoly{ComplexRational(0), ComplexRational(1)})});
  }
  report.all_vanish = true;
  for (const auto& b : report.branches) report.all_vanish = report.all_vanish && b.residual.empty();
  return report;
}

std::string export_branch_points(const BranchPointSet& set, int digits) {
  std::ostringstream out;
  for (const auto& p : set.points) out << p.re.to_string(digits) << ' ' << p.im.to_string(digits) << '\n';
  return out.str();
}

}  // namespace hypzero
