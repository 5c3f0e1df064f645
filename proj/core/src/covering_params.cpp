#include "psd/covering_params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psd {

double CoveringParams::X(std::uint64_t r) const { return std::pow(static_cast<double>(r), x_exp()); }

double CoveringParams::eps(std::uint64_t r) const { return std::pow(static_cast<double>(r), -beta); }

std::vector<double> CoveringParams::b_double() const {
  std::vector<double> out;
  out.reserve(b.size());
  for (const auto& v : b) out.push_back(v.get_d());
  return out;
}

double CoveringParams::b_k() const {
  if (b.empty()) throw std::invalid_argument("covering parameters need at least one weight");
  return b.back().get_d();
}

namespace {

bool x_window_holds(const CoveringParams& p, std::uint64_t r) {
  const double X = p.X(r);
  return 2.0 * p.eps(r) < X && X < p.b_k() / (2.0 * static_cast<double>(r));
}

}  // namespace

void CoveringParams::validate() {
  if (b.empty()) throw std::invalid_argument("b must contain at least one weight");
  for (const auto& v : b) {
    if (v <= 0) throw std::invalid_argument("weights must be positive, got " + psd::to_string(v));
  }
  if (!(1.0 < beta && beta < s && s < t && t < gamma)) {
    std::ostringstream msg;
    msg << "need 1 < beta < s < t < gamma, got beta=" << beta << " s=" << s << " t=" << t << " gamma=" << gamma;
    throw std::invalid_argument(msg.str());
  }
  if (M < 2 || M > R) throw std::invalid_argument("need 2 <= M <= R");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");

  const auto report = validate_min_r(*this);
  if (report.x_window == 0) {
    warnings.push_back("X-window 2r^-beta < X(r) < b_k/(2r) fails for every r in [" + std::to_string(M) + ", " +
                       std::to_string(R) + "]; keeping M=" + std::to_string(M));
  } else if (report.x_window > M) {
    warnings.push_back("raised M from " + std::to_string(M) + " to " + std::to_string(report.x_window) +
                       " so that 2r^-beta < X(r) < b_k/(2r)");
    M = report.x_window;
  }
}

MinRReport validate_min_r(const CoveringParams& params) {
  MinRReport out;
  for (std::uint64_t r = 2; r <= std::max<std::uint64_t>(params.R, 2); ++r) {
    if (params.eps(r) < 1.0) {
      out.level_window = r;
      break;
    }
  }
  // The lower inequality only improves with r; the upper one improves with r
  // exactly when x_exp < -1, so the first admissible r >= M starts a run.
  for (std::uint64_t r = params.M; r <= params.R; ++r) {
    if (x_window_holds(params, r)) {
      out.x_window = r;
      break;
    }
  }
  return out;
}

double pruning_bound(const Rational& b_j, double beta, double gamma) {
  if (b_j <= 0) throw std::invalid_argument("pruning_bound: b_j must be positive");
  if (!(1.0 < beta && beta < gamma)) throw std::invalid_argument("pruning_bound: need 1 < beta < gamma");
  const double b = b_j.get_d();
  return std::max(std::pow(b, -1.0 / beta), std::pow(b, -1.0 / gamma));
}

}  // namespace psd
