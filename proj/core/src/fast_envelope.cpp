#include "psd/fast_envelope.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace psd {

namespace {

constexpr long double kUlp = LDBL_EPSILON;
constexpr int kMaxIter = 200;

// Root nearest zero of c2 d^2 + c1 d + c0 = 0; nullopt when the model has no
// real root.
std::optional<long double> quadratic_offset(long double c2, long double c1, long double c0) {
  if (c0 == 0) return 0.0L;
  const long double disc = c1 * c1 - 4 * c2 * c0;
  if (disc < 0) return std::nullopt;
  const long double root = std::sqrt(disc);
  const long double denom = c1 + std::copysign(root, c1);
  if (denom == 0) return std::nullopt;
  return -2 * c0 / denom;
}

}  // namespace

void FastEnvelope::assign(std::span<const double> b, std::span<const std::uint64_t> q, std::uint64_t r) {
  if (b.size() != q.size()) throw std::invalid_argument("FastEnvelope: b and q differ in length");
  b_.assign(b.begin(), b.end());
  lq_.resize(q.size());
  const long double rr = static_cast<long double>(r);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const long double diff = static_cast<long double>(q[i]) - rr;
    lq_[i] = std::log1p(diff / rr);
  }
}

void FastEnvelope::assign_logs(std::span<const double> b, std::span<const long double> log_q) {
  if (b.size() != log_q.size()) throw std::invalid_argument("FastEnvelope: b and log_q differ in length");
  b_.assign(b.begin(), b.end());
  lq_.assign(log_q.begin(), log_q.end());
}

long double FastEnvelope::E(long double u) const {
  long double s = 0;
  for (std::size_t i = 0; i < b_.size(); ++i) s += b_[i] * std::exp(u * lq_[i]);
  return s;
}

long double FastEnvelope::dE(long double u) const {
  long double s = 0;
  for (std::size_t i = 0; i < b_.size(); ++i) s += b_[i] * std::exp(u * lq_[i]) * lq_[i];
  return s;
}

void FastEnvelope::eval(long double u, long double& e0, long double& e1, long double& e2) const {
  e0 = e1 = e2 = 0;
  for (std::size_t i = 0; i < b_.size(); ++i) {
    const long double term = b_[i] * std::exp(u * lq_[i]);
    e0 += term;
    e1 += term * lq_[i];
    e2 += term * lq_[i] * lq_[i];
  }
}

bool FastEnvelope::has_minimum() const {
  bool neg = false, pos = false;
  for (auto l : lq_) {
    neg |= l < 0;
    pos |= l > 0;
  }
  return neg && pos;
}

FastCritical FastEnvelope::critical_in(long double lo, long double hi) const {
  if (dE(lo) >= 0) return {lo, E(lo)};
  if (dE(hi) <= 0) return {hi, E(hi)};
  // Safeguarded Newton on the increasing function E'.
  long double u = 0.5L * (lo + hi);
  for (int it = 0; it < kMaxIter; ++it) {
    long double e0, e1, e2;
    eval(u, e0, e1, e2);
    if (e1 == 0) break;
    if (e1 > 0) {
      hi = u;
    } else {
      lo = u;
    }
    long double next = e2 > 0 ? u - e1 / e2 : 0.5L * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    const bool done = std::abs(next - u) <= 2 * kUlp * std::max(1.0L, std::abs(u)) ||
                      hi - lo <= 2 * kUlp * std::max(1.0L, std::abs(u));
    u = next;
    if (done) break;
  }
  return {u, E(u)};
}

std::optional<FastCritical> FastEnvelope::critical(long double gamma) const {
  if (!has_minimum()) return std::nullopt;
  long double lo = -2, hi = 2 * gamma;
  for (int i = 0; i < 64 && dE(lo) >= 0; ++i) lo -= (hi - lo);
  for (int i = 0; i < 64 && dE(hi) <= 0; ++i) hi += (hi - lo);
  return critical_in(lo, hi);
}

FastClassification FastEnvelope::classify(long double beta, long double gamma, long double eps,
                                          long double X) const {
  bool neg = false, pos = false;
  for (auto l : lq_) {
    neg |= l < 0;
    pos |= l > 0;
  }
  if (!pos) return {CaseTag::Case1, std::nullopt};
  if (!neg) return {CaseTag::Case2, std::nullopt};

  auto slope_and_scale = [&](long double u, long double& d, long double& scale) {
    d = scale = 0;
    for (std::size_t i = 0; i < b_.size(); ++i) {
      const long double term = b_[i] * std::exp(u * lq_[i]) * lq_[i];
      d += term;
      scale += std::abs(term);
    }
  };
  long double d, scale;
  slope_and_scale(beta, d, scale);
  // A tie at beta or gamma counts as u0 in (beta, gamma).
  if (d > 1e-15L * scale) return {CaseTag::Case31, std::nullopt};
  slope_and_scale(gamma, d, scale);
  if (d < -1e-15L * scale) return {CaseTag::Case32, std::nullopt};

  const FastCritical c = critical_in(beta, gamma);
  const long double tol = 64 * kUlp * std::max(1.0L, c.m);
  CaseTag tag;
  if (c.m - 1 > eps + tol) {
    tag = CaseTag::Case332;
  } else if (c.m - 1 < -X - tol) {
    tag = CaseTag::Case333;
  } else {
    tag = CaseTag::Case331;
  }
  return {tag, c};
}

long double FastEnvelope::root(long double level, long double a, long double b, int dir) const {
  long double lo = a, hi = b;
  long double u = 0.5L * (a + b);
  for (int it = 0; it < kMaxIter; ++it) {
    long double e0, e1, e2;
    eval(u, e0, e1, e2);
    const long double g = e0 - level;
    if (g == 0) return u;
    if ((g > 0) == (dir < 0)) {
      lo = u;
    } else {
      hi = u;
    }
    long double next = e1 != 0 ? u - g / e1 : 0.5L * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    const long double tol = 2 * kUlp * std::max(1.0L, std::abs(u));
    const bool done = std::abs(next - u) <= tol || hi - lo <= tol;
    u = next;
    if (done) break;
  }
  return u;
}

bool FastEnvelope::piece(long double eps, long double a, long double b, int dir, FastComponent& out) const {
  const long double fa = E(a) - 1;
  const long double fb = E(b) - 1;
  // f runs from f_first to f_last as u goes from a to b.
  const long double f_low = dir < 0 ? fb : fa;   // the smaller end value
  const long double f_high = dir < 0 ? fa : fb;  // the larger end value
  if (f_low > eps || f_high < -eps) return false;

  if (eps >= kTinyEps) {
    const long double up = 1 + eps, down = 1 - eps;
    long double lo, hi;
    if (dir < 0) {
      lo = fa <= eps ? a : root(up, a, b, dir);
      hi = fb >= -eps ? b : root(down, a, b, dir);
    } else {
      lo = fa >= -eps ? a : root(down, a, b, dir);
      hi = fb <= eps ? b : root(up, a, b, dir);
    }
    out = {lo, 0, hi - lo};
    return true;
  }

  // Tiny window: anchor at the root of E = 1 (where f is 0 by construction)
  // or at the clipping end when f does not change sign on [a, b].
  long double anchor, f0;
  if (f_low <= 0 && f_high >= 0) {
    anchor = root(1, a, b, dir);
    f0 = 0;
  } else if (f_low > 0) {
    anchor = dir < 0 ? b : a;
    f0 = f_low;
  } else {
    anchor = dir < 0 ? a : b;
    f0 = f_high;
  }
  long double e0, e1, e2;
  eval(anchor, e0, e1, e2);
  const long double c1 = e1, c2 = e2 / 2;
  // Decreasing pieces meet +eps first; increasing ones meet -eps first.
  const long double first_level = dir < 0 ? eps : -eps;
  auto lo_off = quadratic_offset(c2, c1, f0 - first_level);
  auto hi_off = quadratic_offset(c2, c1, f0 + first_level);
  long double lo = lo_off ? *lo_off : a - anchor;
  long double hi = hi_off ? *hi_off : b - anchor;
  lo = std::max(lo, a - anchor);
  hi = std::min(hi, b - anchor);
  if (lo > hi) return false;
  out = {anchor, lo, hi};
  return true;
}

FastCover FastEnvelope::cover(long double eps, long double s, long double t,
                              const std::optional<FastCritical>& critical) const {
  FastCover out;
  auto add = [&](long double a, long double b, int dir) {
    FastComponent c;
    if (piece(eps, a, b, dir, c)) out.comp[out.count++] = c;
  };

  if (!has_minimum()) {
    add(s, t, lq_.empty() || lq_.front() < 0 ? -1 : +1);
    return out;
  }
  long double u0, m;
  if (critical) {
    u0 = critical->u0;
    m = critical->m;
  } else {
    const FastCritical c = critical_in(s, t);
    u0 = c.u0;
    m = c.m;
  }
  if (u0 <= s) {
    add(s, t, +1);
    return out;
  }
  if (u0 >= t) {
    add(s, t, -1);
    return out;
  }
  add(s, u0, -1);
  add(u0, t, +1);
  if (out.count == 2 && m - 1 >= -eps) {
    // Both branches reach u0, so J is one interval.
    FastComponent merged = out.comp[0];
    merged.hi_off = (out.comp[1].anchor - merged.anchor) + out.comp[1].hi_off;
    out.comp[0] = merged;
    out.count = 1;
  }
  return out;
}

void FastEnvelope::range_on(long double s, long double t, long double& lo, long double& hi) const {
  const long double es = E(s), et = E(t);
  hi = std::max(es, et);
  if (!has_minimum()) {
    lo = std::min(es, et);
    return;
  }
  lo = critical_in(s, t).m;
}

}  // namespace psd
