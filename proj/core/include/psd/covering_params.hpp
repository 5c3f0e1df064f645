#pragma once

// Parameters of the covering families: weights b, the exponents
// 1 < beta < s < t < gamma, the radius window [M, R], the X(r) threshold
// exponent and the premeasure exponent sigma.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psd/rigor.hpp"

namespace psd {

struct CoveringParams {
  std::vector<Rational> b;
  double beta = 4.0;
  double s = 4.5;
  double t = 5.0;
  double gamma = 8.0;
  std::uint64_t M = 2;
  std::uint64_t R = 100;
  /// Exponent of X(r) = r^x_exponent; unset means 2(1 - beta)/3.
  std::optional<double> x_exponent;
  double sigma = 1.0;
  /// Notes recorded by validate(), e.g. when M had to be raised.
  std::vector<std::string> warnings;

  std::size_t k() const { return b.size(); }
  double x_exp() const { return x_exponent.value_or(2.0 * (1.0 - beta) / 3.0); }
  double X(std::uint64_t r) const;
  /// r^-beta.
  double eps(std::uint64_t r) const;
  std::vector<double> b_double() const;
  /// The last weight b_k, which sets the minima spacing and the H_l bins.
  double b_k() const;

  /// Checks 1 < beta < s < t < gamma, 2 <= M <= R and positive weights
  /// (throws std::invalid_argument), then raises M to the first r at which
  /// 2 r^-beta < X(r) < b_k / (2r) holds, recording a warning. When no r in
  /// [M, R] qualifies, M is kept and a warning is recorded.
  void validate();
};

/// Smallest radii at which the covering bounds' preconditions hold.
struct MinRReport {
  /// [1 - r^-beta, 1 + r^-beta] lies inside (0, 2).
  std::uint64_t level_window = 0;
  /// 2 r^-beta < X(r) < b_k / (2r); 0 when no r <= R qualifies.
  std::uint64_t x_window = 0;
};

MinRReport validate_min_r(const CoveringParams& params);

/// B_j = max(b_j^(-1/beta), b_j^(-1/gamma)).
double pruning_bound(const Rational& b_j, double beta, double gamma);

}  // namespace psd
