#include "psd/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace psd {

namespace {

constexpr std::size_t kLeaf = 8;

double pairwise(const double* v, std::size_t n) {
  if (n <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return pairwise(values.data(), values.size()); }

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("least_squares: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateFit("least_squares: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateFit("least_squares: all x coincide");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residual = std::max(fit.residual, std::abs(y[i] - (fit.intercept + fit.slope * x[i])));
  }
  return fit;
}

LineFit log_log_fit(const std::vector<std::pair<double, double>>& points, std::size_t min_points) {
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (x > 0.0 && y > 0.0) {
      lx.push_back(std::log(x));
      ly.push_back(std::log(y));
    }
  }
  if (lx.size() < std::max<std::size_t>(min_points, 2)) {
    throw DegenerateFit("log-log fit needs at least " + std::to_string(min_points) + " positive points, got " +
                        std::to_string(lx.size()));
  }
  return least_squares(lx, ly);
}

}  // namespace psd
