#pragma once

// Long-double evaluation of E(u) = sum b_i exp(u ln Q_i) for bulk covering
// enumeration. The level window r^-beta can be far below long double
// resolution, so covering intervals are returned as an anchor plus offsets:
// for tiny windows the offsets come from the local quadratic model
// c1 d + c2 d^2 = +-eps at the root of E = 1, which resolves diameters down
// to any eps while the anchor itself carries the usual rounding error.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "psd/envelope.hpp"

namespace psd {

struct FastCritical {
  long double u0 = 0;
  long double m = 0;
};

struct FastComponent {
  long double anchor = 0;
  long double lo_off = 0;
  long double hi_off = 0;

  long double lo() const { return anchor + lo_off; }
  long double hi() const { return anchor + hi_off; }
  long double diam() const { return hi_off - lo_off; }
};

struct FastCover {
  int count = 0;
  FastComponent comp[2];

  bool empty() const { return count == 0; }
  long double hull_diam() const {
    if (count == 0) return 0;
    if (count == 1) return comp[0].diam();
    return (comp[1].anchor - comp[0].anchor) + (comp[1].hi_off - comp[0].lo_off);
  }
};

struct FastClassification {
  CaseTag tag = CaseTag::Case1;
  std::optional<FastCritical> critical;
};

class FastEnvelope {
 public:
  FastEnvelope() = default;
  FastEnvelope(std::span<const double> b, std::span<const std::uint64_t> q, std::uint64_t r) { assign(b, q, r); }

  /// ln Q_i is taken as log1p((q_i - r) / r), accurate when q_i is near r.
  void assign(std::span<const double> b, std::span<const std::uint64_t> q, std::uint64_t r);
  void assign_logs(std::span<const double> b, std::span<const long double> log_q);

  std::size_t k() const { return b_.size(); }
  const std::vector<long double>& log_q() const { return lq_; }

  long double E(long double u) const;
  long double dE(long double u) const;
  /// E, E' and E'' in one pass.
  void eval(long double u, long double& e0, long double& e1, long double& e2) const;

  bool has_minimum() const;
  /// Minimiser over all of R (bracket [-2, 2 gamma], expanded as needed).
  std::optional<FastCritical> critical(long double gamma) const;
  /// Minimiser restricted to [lo, hi]; clamps to an end when E' has no sign
  /// change there.
  FastCritical critical_in(long double lo, long double hi) const;

  /// Case tag against (beta, gamma) and the m thresholds 1 - X, 1 + eps.
  FastClassification classify(long double beta, long double gamma, long double eps, long double X) const;

  /// {u in [s, t] : |E(u) - 1| <= eps}. `critical`, when given, must be the
  /// minimiser; otherwise the monotone pieces of [s, t] are found directly.
  FastCover cover(long double eps, long double s, long double t,
                  const std::optional<FastCritical>& critical = std::nullopt) const;

  /// min and max of E over [s, t] (convexity puts the max at an end).
  void range_on(long double s, long double t, long double& lo, long double& hi) const;

  /// Below this window the quadratic offset model is used.
  static constexpr long double kTinyEps = 1e-10L;

 private:
  /// Root of E(u) = level on [a, b] where E is monotone with direction dir.
  long double root(long double level, long double a, long double b, int dir) const;
  bool piece(long double eps, long double a, long double b, int dir, FastComponent& out) const;

  std::vector<long double> b_;
  std::vector<long double> lq_;
};

}  // namespace psd
