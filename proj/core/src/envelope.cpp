#include "psd/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "psd/fast_envelope.hpp"

namespace psd {

Envelope Envelope::from_indices(const std::vector<Rational>& b, const std::vector<std::uint64_t>& q,
                                std::uint64_t r) {
  if (b.size() != q.size()) throw std::invalid_argument("b and q differ in length");
  if (r == 0) throw std::invalid_argument("r must be positive");
  Envelope env;
  env.b = b;
  for (auto qi : q) {
    Rational v{BigInt(qi), BigInt(r)};
    v.canonicalize();
    env.Q.push_back(v);
  }
  return env;
}

bool Envelope::has_minimum() const {
  bool below = false, above = false;
  for (const auto& v : Q) {
    below |= v < 1;
    above |= v > 1;
  }
  return below && above;
}

void Envelope::validate() const {
  if (b.empty() || b.size() != Q.size()) throw std::invalid_argument("envelope needs k >= 1 matching b and Q");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] <= 0 || Q[i] <= 0) throw std::invalid_argument("envelope weights and ratios must be positive");
  }
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Decreasing: return "decreasing";
    case Branch::L1: return "L1";
    case Branch::L2: return "L2";
  }
  return "?";
}

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::Case1: return "Case1";
    case CaseTag::Case2: return "Case2";
    case CaseTag::Case31: return "Case31";
    case CaseTag::Case32: return "Case32";
    case CaseTag::Case331: return "Case331";
    case CaseTag::Case332: return "Case332";
    case CaseTag::Case333: return "Case333";
  }
  return "?";
}

int case_code(CaseTag tag) {
  switch (tag) {
    case CaseTag::Case1: return 1;
    case CaseTag::Case2: return 2;
    case CaseTag::Case31: return 31;
    case CaseTag::Case32: return 32;
    case CaseTag::Case331: return 331;
    case CaseTag::Case332: return 332;
    case CaseTag::Case333: return 333;
  }
  return 0;
}

namespace {

// Rigorous evaluator with ln Q_i and b_i enclosed once per precision.
class Evaluator {
 public:
  Evaluator(const Envelope& env, int bits) : bits_(bits) {
    env.validate();
    for (std::size_t i = 0; i < env.k(); ++i) {
      b_.push_back(BoundedReal::from_rational(env.b[i], bits));
      lnq_.push_back(log(BoundedReal::from_rational(env.Q[i], bits)));
    }
  }

  int bits() const { return bits_; }

  BoundedReal eval(const BoundedReal& u, int order) const {
    if (order < 0 || order > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
    BoundedReal sum = BoundedReal::from_integer(0, bits_);
    for (std::size_t i = 0; i < b_.size(); ++i) {
      BoundedReal term = b_[i] * exp(u * lnq_[i]);
      for (int o = 0; o < order; ++o) term = term * lnq_[i];
      sum = sum + term;
    }
    return sum;
  }

  BoundedReal eval(const Mpfr& u, int order) const { return eval(BoundedReal::point(u, bits_), order); }

 private:
  int bits_;
  std::vector<BoundedReal> b_;
  std::vector<BoundedReal> lnq_;
};

Mpfr midpoint(const Mpfr& a, const Mpfr& b, int bits) {
  Mpfr m(bits);
  mpfr_add(m.get(), a.get(), b.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

Mpfr from_double(double v, int bits) {
  Mpfr out(bits);
  mpfr_set_d(out.get(), v, MPFR_RNDN);
  return out;
}

double width_of(const Mpfr& a, const Mpfr& b) {
  Mpfr w(std::max(a.precision(), b.precision()));
  mpfr_sub(w.get(), b.get(), a.get(), MPFR_RNDU);
  return w.to_double(MPFR_RNDU);
}

bool width_below(const Mpfr& a, const Mpfr& b, double tol, int bits) {
  const double w = width_of(a, b);
  const double scale = std::max(1.0, std::abs(a.to_double()));
  return w <= tol || w <= std::ldexp(scale, -(bits - 6));
}

// Sign of an enclosure: +1 / -1 when certain, 0 when it contains zero.
int certain_sign(const BoundedReal& v) {
  if (v.certainly_positive()) return 1;
  if (v.certainly_negative()) return -1;
  return 0;
}

std::optional<CriticalData> critical_impl(const Evaluator& ev, const Envelope& env, double tol, double gamma,
                                          int max_iter) {
  if (!env.has_minimum()) return std::nullopt;
  const int bits = ev.bits();
  Mpfr a = from_double(-2.0, bits), b = from_double(2.0 * gamma, bits);
  for (int i = 0; i < 64 && certain_sign(ev.eval(a, 1)) >= 0; ++i) {
    Mpfr w(bits);
    mpfr_sub(w.get(), b.get(), a.get(), MPFR_RNDN);
    mpfr_sub(a.get(), a.get(), w.get(), MPFR_RNDD);
  }
  for (int i = 0; i < 64 && certain_sign(ev.eval(b, 1)) <= 0; ++i) {
    Mpfr w(bits);
    mpfr_sub(w.get(), b.get(), a.get(), MPFR_RNDN);
    mpfr_add(b.get(), b.get(), w.get(), MPFR_RNDU);
  }
  for (int it = 0; it < max_iter && !width_below(a, b, tol, bits); ++it) {
    Mpfr mid = midpoint(a, b, bits);
    const int sgn = certain_sign(ev.eval(mid, 1));
    if (sgn > 0) {
      b = mid;
    } else if (sgn < 0) {
      a = mid;
    } else {
      break;  // E'(mid) is indistinguishable from 0 at this precision
    }
  }
  BoundedReal u0(a, b, bits);
  BoundedReal m = ev.eval(u0, 0);
  return CriticalData{std::move(u0), std::move(m)};
}

}  // namespace

BoundedReal eval_derivative(const Envelope& env, const BoundedReal& u, int order, int bits) {
  return Evaluator(env, bits).eval(u, order);
}

BoundedReal eval_derivative(const Envelope& env, double u, int order, int bits) {
  return Evaluator(env, bits).eval(BoundedReal::point(u, bits), order);
}

std::optional<CriticalData> critical_point(const Envelope& env, double tol, double gamma, int bits) {
  Evaluator ev(env, bits);
  return critical_impl(ev, env, tol, gamma, 200);
}

BoundedReal invert_on_branch(const Envelope& env, double y, Branch branch, int bits) {
  Evaluator ev(env, bits);
  const BoundedReal Y = BoundedReal::point(y, bits);
  auto above = [&](const Mpfr& u) { return ev.eval(u, 0).certainly_greater(Y); };
  auto below = [&](const Mpfr& u) { return ev.eval(u, 0).certainly_less(Y); };

  Mpfr lo(bits), hi(bits);
  int dir = -1;  // direction of E on [lo, hi]
  switch (branch) {
    case Branch::Decreasing: {
      bool all_below = true, all_above = true, all_one = true;
      for (const auto& v : env.Q) {
        all_below &= v <= 1;
        all_above &= v >= 1;
        all_one &= v == 1;
      }
      if (all_one || !(all_below || all_above)) {
        throw OutOfRange("Decreasing branch needs every Q_i on one side of 1");
      }
      dir = all_below ? -1 : +1;
      // E sweeps (sum of b_i with Q_i = 1, inf); bracket by expansion.
      lo = from_double(0.0, bits);
      hi = from_double(1.0, bits);
      auto high_side = [&](const Mpfr& u) { return !below(u); };
      auto low_side = [&](const Mpfr& u) { return !above(u); };
      Mpfr& rises = dir < 0 ? lo : hi;  // end where E must reach >= y
      Mpfr& falls = dir < 0 ? hi : lo;  // end where E must reach <= y
      double step = 1.0;
      for (int i = 0; i < 80 && !high_side(rises); ++i, step *= 2) {
        mpfr_add_d(rises.get(), rises.get(), dir < 0 ? -step : step, MPFR_RNDN);
      }
      step = 1.0;
      for (int i = 0; i < 80 && !low_side(falls); ++i, step *= 2) {
        mpfr_add_d(falls.get(), falls.get(), dir < 0 ? step : -step, MPFR_RNDN);
      }
      if (!high_side(rises) || !low_side(falls)) throw OutOfRange("y outside the image of E");
      break;
    }
    case Branch::L1:
    case Branch::L2: {
      auto crit = critical_impl(ev, env, 0.0, 8.0, 400);
      if (!crit) throw OutOfRange("E has no interior minimum, so L1/L2 are undefined");
      if (crit->m.certainly_greater(Y)) throw OutOfRange("y below the minimum m");
      if (branch == Branch::L1) {
        if (mpfr_sgn(crit->u0.hi().get()) <= 0) throw OutOfRange("u0 <= 0, L1 has an empty domain");
        lo = from_double(0.0, bits);
        hi = crit->u0.hi();
        if (below(lo)) throw OutOfRange("y above E(0), outside the image of L1");
        dir = -1;
      } else {
        lo = crit->u0.lo();
        hi = from_double(std::max(1.0, crit->u0.midpoint() + 1.0), bits);
        double step = 1.0;
        for (int i = 0; i < 80 && below(hi); ++i, step *= 2) mpfr_add_d(hi.get(), hi.get(), step, MPFR_RNDU);
        if (below(hi)) throw OutOfRange("y outside the image of L2");
        dir = +1;
      }
      break;
    }
  }

  const double target = 1e-15 * std::max(1.0, std::abs(y));
  for (int it = 0; it < 200; ++it) {
    Mpfr mid = midpoint(lo, hi, bits);
    BoundedReal diff = ev.eval(mid, 0) - Y;
    // Stop while mid is still the midpoint of the returned bracket.
    if (abs(diff).hi().to_double(MPFR_RNDU) <= target) break;
    const int sgn = certain_sign(diff);
    if (sgn == 0) break;
    if ((sgn > 0) == (dir < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return BoundedReal(lo, hi, bits);
}

// ---------------------------------------------------------------- covering interval

bool CoverInterval::certainly_contains(const BoundedReal& u) const {
  for (const auto& c : components) {
    if (mpfr_cmp(c.lo.hi().get(), u.lo().get()) <= 0 && mpfr_cmp(u.hi().get(), c.hi.lo().get()) <= 0) return true;
  }
  return false;
}

bool CoverInterval::may_contain(double u) const {
  for (const auto& c : components) {
    if (mpfr_cmp_d(c.lo.lo().get(), u) <= 0 && mpfr_cmp_d(c.hi.hi().get(), u) >= 0) return true;
  }
  return false;
}

namespace {

// Enclosure of the point where E crosses `level` on [a, b], E monotone with
// direction dir and the crossing certain to exist.
BoundedReal crossing(const Evaluator& ev, const BoundedReal& level, Mpfr a, Mpfr b, int dir) {
  const int bits = ev.bits();
  for (int it = 0; it < bits + 64 && !width_below(a, b, 0.0, bits); ++it) {
    Mpfr mid = midpoint(a, b, bits);
    const int sgn = certain_sign(ev.eval(mid, 0) - level);
    if (sgn == 0) break;
    if ((sgn > 0) == (dir < 0)) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return BoundedReal(std::move(a), std::move(b), bits);
}

// The part of [a, b] where L <= E <= H, E monotone with direction dir.
std::optional<CoverPiece> monotone_piece(const Evaluator& ev, const BoundedReal& L, const BoundedReal& H,
                                         const Mpfr& a, const Mpfr& b, int dir) {
  const int bits = ev.bits();
  const BoundedReal Ea = ev.eval(a, 0), Eb = ev.eval(b, 0);
  const BoundedReal& E_first_high = dir < 0 ? Ea : Eb;  // the larger end value
  const BoundedReal& E_low = dir < 0 ? Eb : Ea;
  if (E_low.certainly_greater(H) || E_first_high.certainly_less(L)) return std::nullopt;

  auto point = [&](const Mpfr& u) { return BoundedReal::point(u, bits); };
  if (dir < 0) {
    BoundedReal lo = Ea.certainly_greater(H) ? crossing(ev, H, a, b, dir) : point(a);
    BoundedReal hi = Eb.certainly_less(L) ? crossing(ev, L, a, b, dir) : point(b);
    return CoverPiece{std::move(lo), std::move(hi)};
  }
  BoundedReal lo = Ea.certainly_less(L) ? crossing(ev, L, a, b, dir) : point(a);
  BoundedReal hi = Eb.certainly_greater(H) ? crossing(ev, H, a, b, dir) : point(b);
  return CoverPiece{std::move(lo), std::move(hi)};
}

double diameter(const BoundedReal& lo, const BoundedReal& hi) { return width_of(lo.lo(), hi.hi()); }

}  // namespace

CoverInterval cover_interval(const Envelope& env, std::uint64_t r, double beta, double s, double t) {
  if (!(1.0 < beta && s < t)) throw std::invalid_argument("cover_interval: need beta > 1 and s < t");
  if (r < 2) throw std::invalid_argument("cover_interval: r must be >= 2");
  env.validate();

  const int bits = std::max(128, static_cast<int>(std::ceil(beta * std::log2(static_cast<double>(r)))) + 96);
  Evaluator ev(env, bits);

  CoverInterval out;
  out.r = r;
  bool integral = true;
  for (const auto& v : env.Q) {
    Rational qr = v * Rational(BigInt(r));
    qr.canonicalize();
    if (qr.get_den() != 1 || !qr.get_num().fits_ulong_p()) {
      integral = false;
      break;
    }
    out.q.push_back(qr.get_num().get_ui());
  }
  if (!integral) out.q.clear();

  // eps = r^-beta with beta read exactly from its double value.
  const BoundedReal eps = exp(-(BoundedReal::point(beta, bits) * log(BoundedReal::from_integer(BigInt(r), bits))));
  const BoundedReal one = BoundedReal::from_integer(1, bits);
  const BoundedReal L = one - eps, H = one + eps;
  const Mpfr S = from_double(s, bits), T = from_double(t, bits);

  std::vector<CoverPiece> pieces;
  auto add = [&](const Mpfr& a, const Mpfr& b, int dir) {
    if (auto p = monotone_piece(ev, L, H, a, b, dir)) pieces.push_back(std::move(*p));
  };

  if (!env.has_minimum()) {
    const bool decreasing = std::all_of(env.Q.begin(), env.Q.end(), [](const Rational& v) { return v <= 1; });
    add(S, T, decreasing ? -1 : +1);
  } else {
    auto crit = critical_impl(ev, env, 0.0, std::max(8.0, t), bits + 64);
    const Mpfr c = crit->u0.mid();
    if (mpfr_cmp(c.get(), S.get()) <= 0) {
      add(S, T, +1);
    } else if (mpfr_cmp(c.get(), T.get()) >= 0) {
      add(S, T, -1);
    } else {
      Mpfr split(bits);
      mpfr_set(split.get(), c.get(), MPFR_RNDN);
      add(S, split, -1);
      add(split, T, +1);
      if (pieces.size() == 2 && !crit->m.certainly_less(L)) {
        // Both branches reach u0, so J is a single interval.
        CoverPiece merged{pieces[0].lo, pieces[1].hi};
        pieces.assign(1, std::move(merged));
      }
    }
  }

  out.empty = pieces.empty();
  out.components = std::move(pieces);
  for (const auto& p : out.components) out.component_diams.push_back(diameter(p.lo, p.hi));
  out.diam = out.empty ? 0.0 : diameter(out.lo(), out.hi());
  return out;
}

CaseTag classify_case(const std::vector<std::uint64_t>& q, std::uint64_t r, const CoveringParams& params) {
  if (q.size() != params.k()) throw std::invalid_argument("classify_case: q and b differ in length");
  for (auto qi : q) {
    if (qi == r) throw std::invalid_argument("classify_case: every q_j must differ from r");
  }
  const auto b = params.b_double();
  FastEnvelope fe(b, q, r);
  return fe.classify(params.beta, params.gamma, params.eps(r), params.X(r)).tag;
}

}  // namespace psd
