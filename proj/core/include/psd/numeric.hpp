#pragma once

// Small numerical helpers shared by the counting and covering diagnostics.

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace psd {

class DegenerateFit : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pairwise (cascade) summation in the given order. The result depends only
/// on the sequence, never on how it was produced.
double pairwise_sum(std::span<const double> values);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Largest absolute residual of the fitted line.
  double residual = 0.0;
};

/// Ordinary least squares of y against x. Requires at least two distinct x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Least squares of log(y) against log(x) over points with x > 0 and y > 0.
/// Throws DegenerateFit when fewer than `min_points` such points exist.
LineFit log_log_fit(const std::vector<std::pair<double, double>>& points, std::size_t min_points = 3);

}  // namespace psd
