#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hypzero/rational.hpp"

namespace hypzero {

/// Linear parameter schedule of a terminating AFB polynomial:
///   a_i(n) = alpha_i n + c_i          (i = 1..A, with alpha_1 = -1, c_1 = 0 so a_1 = -n)
///   b_j(n) = beta_j n + d_j + 1       (j = 1..B, A = B + 1)
/// Vectors are stored 0-based, so alphas[0] is alpha_1.
struct ParameterSchedule {
  std::vector<ComplexRational> alphas;
  std::vector<ComplexRational> cs;
  std::vector<ComplexRational> betas;
  std::vector<ComplexRational> ds;

  std::size_t numerator_count() const { return alphas.size(); }
  std::size_t denominator_count() const { return betas.size(); }

  /// Structural checks (A = B + 1, matching lengths, alpha_1 = -1, c_1 = 0). Throws InvalidInput.
  void validate() const;

  ComplexRational numerator_at(std::size_t i, unsigned n) const;
  ComplexRational denominator_at(std::size_t j, unsigned n) const;

  /// beta_j = alpha_{j+1} for every j: the curve splits into rational branches.
  bool is_degenerate() const;

  /// JSON document {"A","B","alphas","cs","betas","ds"}; complex values as "p/q+r/s*i" strings.
  std::string serialize() const;
  static ParameterSchedule parse(std::string_view json_text);

  /// FNV-1a of the canonical serialization, as 16 hex digits.
  std::string hash() const;

  /// 2F1(-n, k n + 1; k n + 2; z), the lemniscate family.
  static ParameterSchedule lemniscate_family(const ComplexRational& k);
  /// (B+1)F(B)(-n, a_2 n, ..., a_A n; a_2 n + 1, ..., a_A n + 1; z).
  static ParameterSchedule shifted_family(const std::vector<ComplexRational>& tail_alphas);
};

}  // namespace hypzero
