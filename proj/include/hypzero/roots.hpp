#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypzero/exact_poly.hpp"
#include "hypzero/hyp_poly.hpp"
#include "hypzero/mp.hpp"

namespace hypzero {

struct RootOptions {
  int precision_bits = 512;
  /// Double the precision (up to max_precision_bits) when a residual fails certification.
  bool auto_refine = true;
  int max_precision_bits = 4096;
  int max_sweeps = 800;
};

/// The zeros of a polynomial, each carrying mass 1/n.
struct RootCountingMeasure {
  std::vector<BigComplex> roots;  // sorted lexicographically by (re, im)
  /// |p(z)| / max_k |c_k| |z|^k for each root.
  std::vector<Real> residual_bounds;
  /// Condition-number bound on |error| / max(1, |z|) for each root; certified below the same threshold.
  std::vector<Real> error_bounds;
  int precision_bits = 0;
  /// Certification threshold 2^(-precision_bits / 4), applied to residual and error bounds.
  Real certification_threshold;
  /// Groups of root indices closer than cluster_radius(); empty when all roots are separated.
  std::vector<std::vector<std::size_t>> clusters;
  /// Maximal log2 relative correction per Aberth sweep of the final (certified) run.
  std::vector<double> sweep_trace;

  std::size_t size() const { return roots.size(); }
  Rational weight() const { return roots.empty() ? Rational(0) : Rational(1, static_cast<unsigned long>(roots.size())); }
  /// 2^(-precision_bits / 8).
  Real cluster_radius() const;
  std::vector<std::complex<double>> as_complex() const;
};

/// All deg(p) zeros by synchronous Aberth-Ehrlich sweeps at the requested precision.
/// Throws ConvergenceError (with the sweep trace) when certification fails at every allowed precision.
RootCountingMeasure find_roots(std::span<const ComplexRational> coeffs, const RootOptions& options = {});
RootCountingMeasure find_roots(const HypPolynomial& p, const RootOptions& options = {});
RootCountingMeasure find_roots(const HypPolynomial& p, int precision_bits);

/// Uncertified roots of a polynomial with multiprecision coefficients (index k multiplies z^k),
/// sorted lexicographically. Multiple roots come back as near-coincident values.
std::vector<BigComplex> polynomial_roots(std::span<const BigComplex> coeffs, int precision_bits);

/// Horner evaluation of p and p' at z.
std::pair<BigComplex, BigComplex> evaluate_with_derivative(std::span<const BigComplex> coeffs, const BigComplex& z);
/// |p(z)| / max_k |c_k| |z|^k.
Real relative_residual(std::span<const BigComplex> coeffs, const BigComplex& z);

/// (1/n) sum 1/(z - zeta); throws Pole when z is within cluster_radius() of a root.
BigComplex cauchy_transform_at(const RootCountingMeasure& m, const BigComplex& z);
/// (1/n) sum log|z - zeta|; same pole rule.
Real log_potential_at(const RootCountingMeasure& m, const BigComplex& z);

struct VietaReport {
  BigComplex sum;
  BigComplex expected_sum;  // -c_{n-1} / c_n
  BigComplex product;
  BigComplex expected_product;  // (-1)^n c_0 / c_n
  Real sum_deviation;      // relative to max(|expected_sum|, sum |zeta|)
  Real product_deviation;  // relative to |expected_product|
  Real max_deviation;
};

VietaReport vieta_check(std::span<const ComplexRational> coeffs, const RootCountingMeasure& m);
VietaReport vieta_check(const HypPolynomial& p, const RootCountingMeasure& m);

/// "# hypzero-roots n=.. precision_bits=.. schedule_hash=.." then "re im residual_bound" per root.
std::string export_roots(const RootCountingMeasure& m, const std::string& schedule_hash);

struct RootFile {
  RootCountingMeasure measure;
  std::string schedule_hash;
};
RootFile import_roots(std::string_view text);

}  // namespace hypzero
