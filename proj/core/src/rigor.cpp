#include "psd/rigor.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>

namespace psd {

PrecisionPolicy PrecisionPolicy::from_environment() {
  PrecisionPolicy policy;
  if (const char* env = std::getenv("PSD_MAX_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < policy.initial_bits) {
      throw std::invalid_argument("PSD_MAX_PRECISION_BITS must be an integer >= 64");
    }
    policy.max_bits = static_cast<int>(std::min<long>(v, 1L << 24));
  }
  return policy;
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational out;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    out = Rational(BigInt(std::string(num), 10), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
      return std::nullopt;
    }
    std::string digits = std::string(whole) + std::string(frac);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    out = Rational(BigInt(digits, 10), scale);
  } else {
    if (!all_digits(text)) return std::nullopt;
    out = Rational(BigInt(std::string(text), 10));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// ---------------------------------------------------------------- Alpha

Alpha::Alpha(Kind kind, Rational value, std::string decimal_text)
    : kind_(kind), value_(std::move(value)), decimal_text_(std::move(decimal_text)) {
  if (value_ <= 1) throw InvalidAlpha("alpha must be > 1, got " + psd::to_string(value_));
  if (value_.get_den() == 1) {
    throw InvalidAlpha("alpha must be non-integral, got " + psd::to_string(value_));
  }
}

Alpha Alpha::rational(const BigInt& numer, const BigInt& denom) {
  if (denom <= 0) throw InvalidAlpha("alpha denominator must be positive");
  Rational v(numer, denom);
  v.canonicalize();
  return Alpha(Kind::ExactRational, v, {});
}

Alpha Alpha::decimal(std::string_view text) {
  if (text.find('/') != std::string_view::npos) throw InvalidAlpha("not a decimal literal");
  auto v = parse_rational(text);
  if (!v) throw InvalidAlpha("cannot parse alpha '" + std::string(text) + "'");
  return Alpha(Kind::Decimal, *v, std::string(text));
}

Alpha Alpha::parse(std::string_view text) {
  if (text.find('/') != std::string_view::npos) {
    auto v = parse_rational(text);
    if (!v) throw InvalidAlpha("cannot parse alpha '" + std::string(text) + "'");
    return rational(v->get_num(), v->get_den());
  }
  return decimal(text);
}

std::string Alpha::text() const {
  return kind_ == Kind::Decimal ? decimal_text_ : psd::to_string(value_);
}

// ---------------------------------------------------------------- Mpfr

Mpfr::Mpfr(mpfr_prec_t bits) { mpfr_init2(value_, bits); }

Mpfr::Mpfr(const Mpfr& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Mpfr::~Mpfr() { mpfr_clear(value_); }

Mpfr Mpfr::from_double(double v, mpfr_prec_t bits) {
  Mpfr out(std::max<mpfr_prec_t>(bits, 53));
  mpfr_set_d(out.get(), v, MPFR_RNDN);
  return out;
}

Mpfr Mpfr::from_long_double(long double v, mpfr_prec_t bits) {
  Mpfr out(std::max<mpfr_prec_t>(bits, 64));
  mpfr_set_ld(out.get(), v, MPFR_RNDN);
  return out;
}

std::string Mpfr::to_string(mpfr_rnd_t rnd, int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), value_, rnd);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!mant.empty() && mant.front() == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(static_cast<long>(exp10) - 1);
  return out;
}

// ---------------------------------------------------------------- BoundedReal

BoundedReal::BoundedReal(Mpfr lo, Mpfr hi, int precision_bits)
    : lo_(std::move(lo)), hi_(std::move(hi)), bits_(precision_bits) {
  if (mpfr_cmp(lo_.get(), hi_.get()) > 0) throw std::logic_error("BoundedReal: lo > hi");
}

BoundedReal BoundedReal::point(double v, int bits) {
  Mpfr lo(bits), hi(bits);
  mpfr_set_d(lo.get(), v, MPFR_RNDD);
  mpfr_set_d(hi.get(), v, MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal BoundedReal::point(const Mpfr& v, int bits) {
  Mpfr lo(bits), hi(bits);
  mpfr_set(lo.get(), v.get(), MPFR_RNDD);
  mpfr_set(hi.get(), v.get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal BoundedReal::from_integer(const BigInt& v, int bits) {
  Mpfr lo(bits), hi(bits);
  mpfr_set_z(lo.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.get(), v.get_mpz_t(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal BoundedReal::from_rational(const Rational& v, int bits) {
  Mpfr lo(bits), hi(bits);
  mpfr_set_q(lo.get(), v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), v.get_mpq_t(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

double BoundedReal::width() const {
  Mpfr w(bits_);
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w.to_double(MPFR_RNDU);
}

Mpfr BoundedReal::mid() const {
  Mpfr m(bits_ + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

double BoundedReal::midpoint() const { return mid().to_double(); }

bool BoundedReal::contains(const BoundedReal& inner) const {
  return mpfr_cmp(lo_.get(), inner.lo_.get()) <= 0 && mpfr_cmp(hi_.get(), inner.hi_.get()) >= 0;
}

bool BoundedReal::contains(const Rational& v) const {
  return mpfr_cmp_q(lo_.get(), v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), v.get_mpq_t()) >= 0;
}

bool BoundedReal::contains(double v) const {
  return mpfr_cmp_d(lo_.get(), v) <= 0 && mpfr_cmp_d(hi_.get(), v) >= 0;
}

bool BoundedReal::certainly_greater(const BoundedReal& other) const {
  return mpfr_cmp(lo_.get(), other.hi_.get()) > 0;
}

BoundedReal BoundedReal::rounded_to(int bits) const {
  Mpfr lo(bits), hi(bits);
  mpfr_set(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_set(hi.get(), hi_.get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal BoundedReal::operator-() const {
  Mpfr lo(bits_), hi(bits_);
  mpfr_neg(lo.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(hi.get(), lo_.get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits_};
}

BoundedReal operator+(const BoundedReal& a, const BoundedReal& b) {
  int bits = std::max(a.bits_, b.bits_);
  Mpfr lo(bits), hi(bits);
  mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal operator-(const BoundedReal& a, const BoundedReal& b) {
  int bits = std::max(a.bits_, b.bits_);
  Mpfr lo(bits), hi(bits);
  mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal operator*(const BoundedReal& a, const BoundedReal& b) {
  int bits = std::max(a.bits_, b.bits_);
  // Sign-aware shortcuts cover the common all-positive case without four products.
  if (mpfr_sgn(a.lo_.get()) >= 0 && mpfr_sgn(b.lo_.get()) >= 0) {
    Mpfr lo(bits), hi(bits);
    mpfr_mul(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_mul(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), bits};
  }
  const std::array<std::pair<mpfr_srcptr, mpfr_srcptr>, 4> pairs{{
      {a.lo_.get(), b.lo_.get()},
      {a.lo_.get(), b.hi_.get()},
      {a.hi_.get(), b.lo_.get()},
      {a.hi_.get(), b.hi_.get()},
  }};
  Mpfr lo(bits), hi(bits), tmp(bits);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), -1);
  for (const auto& [x, y] : pairs) {
    mpfr_mul(tmp.get(), x, y, MPFR_RNDD);
    mpfr_min(lo.get(), lo.get(), tmp.get(), MPFR_RNDD);
    mpfr_mul(tmp.get(), x, y, MPFR_RNDU);
    mpfr_max(hi.get(), hi.get(), tmp.get(), MPFR_RNDU);
  }
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal operator/(const BoundedReal& a, const BoundedReal& b) {
  if (!b.certainly_positive() && !b.certainly_negative()) {
    throw std::domain_error("BoundedReal division by an enclosure containing zero");
  }
  int bits = std::max(a.bits_, b.bits_);
  Mpfr lo(bits), hi(bits);
  mpfr_ui_div(lo.get(), 1, b.hi_.get(), MPFR_RNDD);
  mpfr_ui_div(hi.get(), 1, b.lo_.get(), MPFR_RNDU);
  return a * BoundedReal(std::move(lo), std::move(hi), bits);
}

BoundedReal exp(const BoundedReal& x) {
  int bits = x.precision_bits();
  Mpfr lo(bits), hi(bits);
  mpfr_exp(lo.get(), x.lo().get(), MPFR_RNDD);
  mpfr_exp(hi.get(), x.hi().get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal log(const BoundedReal& x) {
  if (!x.certainly_positive()) throw std::domain_error("log of an enclosure that is not positive");
  int bits = x.precision_bits();
  Mpfr lo(bits), hi(bits);
  mpfr_log(lo.get(), x.lo().get(), MPFR_RNDD);
  mpfr_log(hi.get(), x.hi().get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

BoundedReal abs(const BoundedReal& x) {
  if (mpfr_sgn(x.lo().get()) >= 0) return x;
  if (mpfr_sgn(x.hi().get()) <= 0) return -x;
  int bits = x.precision_bits();
  Mpfr lo(bits), hi(bits);
  mpfr_set_zero(lo.get(), 1);
  mpfr_neg(hi.get(), x.lo().get(), MPFR_RNDU);
  mpfr_max(hi.get(), hi.get(), x.hi().get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi), bits};
}

// ---------------------------------------------------------------- powers and floors

BoundedReal eval_pow_interval(const BigInt& n, const Alpha& alpha, int precision_bits) {
  if (n < 1) throw std::invalid_argument("eval_pow_interval: n must be >= 1");
  if (precision_bits < 32) throw std::invalid_argument("eval_pow_interval: precision_bits must be >= 32");
  if (n == 1) return BoundedReal::from_integer(n, precision_bits);

  // Exponent magnitude alpha*ln(n) is ~ e*ln2 with e = log2(n^alpha); its
  // absolute error is amplified by exp into a relative error ~ e * 2^-work.
  const double e = static_cast<double>(mpz_sizeinbase(n.get_mpz_t(), 2)) * alpha.to_double() + 2.0;
  const int guard = static_cast<int>(std::ceil(std::log2(e))) + 10;
  const int work = precision_bits + guard;

  BoundedReal ln_n = log(BoundedReal::from_integer(n, work));
  BoundedReal a = BoundedReal::from_rational(alpha.value(), work);
  return exp(ln_n * a).rounded_to(precision_bits);
}

BigInt nth_root_floor(const BigInt& m, unsigned long q) {
  if (m < 0) throw std::invalid_argument("nth_root_floor: m must be >= 0");
  if (q == 0) throw std::invalid_argument("nth_root_floor: q must be >= 1");
  BigInt k;
  mpz_root(k.get_mpz_t(), m.get_mpz_t(), q);
  return k;
}

namespace {

unsigned long to_ulong(const BigInt& v, const char* what) {
  if (v < 0 || !v.fits_ulong_p()) throw std::overflow_error(std::string(what) + " does not fit in an unsigned long");
  return v.get_ui();
}

// n^alpha with alpha = p/q in lowest terms is an integer iff n is a perfect
// q-th power c^q, in which case it equals c^p.
std::optional<BigInt> exact_integer_power(const BigInt& n, const Alpha& alpha) {
  if (!alpha.denom().fits_ulong_p() || !alpha.numer().fits_ulong_p()) return std::nullopt;
  BigInt c;
  if (mpz_root(c.get_mpz_t(), n.get_mpz_t(), alpha.denom().get_ui()) == 0) return std::nullopt;
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), c.get_mpz_t(), alpha.numer().get_ui());
  return out;
}

}  // namespace

BigInt floor_pow_adaptive(const BigInt& n, const Alpha& alpha, const PrecisionPolicy& policy) {
  if (n < 1) throw std::invalid_argument("floor_pow: n must be >= 1");
  bool tried_exact = false;
  for (int bits = std::max(policy.initial_bits, 32); bits <= policy.max_bits; bits *= 2) {
    BoundedReal enc = eval_pow_interval(n, alpha, bits);
    BigInt fl, fh;
    mpfr_get_z(fl.get_mpz_t(), enc.lo().get(), MPFR_RNDD);
    mpfr_get_z(fh.get_mpz_t(), enc.hi().get(), MPFR_RNDD);
    if (fl == fh) return fl;
    if (!tried_exact) {
      tried_exact = true;
      if (auto exact = exact_integer_power(n, alpha)) return *exact;
    }
  }
  throw PrecisionExhausted("floor(" + n.get_str() + "^" + alpha.text() + ") undecided at " +
                           std::to_string(policy.max_bits) + " bits");
}

BigInt floor_pow(const BigInt& n, const Alpha& alpha, const PrecisionPolicy& policy) {
  if (n < 1) throw std::invalid_argument("floor_pow: n must be >= 1");
  if (alpha.kind() == Alpha::Kind::Decimal) return floor_pow_adaptive(n, alpha, policy);
  BigInt power;
  mpz_pow_ui(power.get_mpz_t(), n.get_mpz_t(), to_ulong(alpha.numer(), "alpha numerator"));
  return nth_root_floor(power, to_ulong(alpha.denom(), "alpha denominator"));
}

std::optional<BigInt> contains_integer(const BoundedReal& lo, const BoundedReal& hi, bool half_open) {
  if (mpfr_cmp(lo.lo().get(), hi.hi().get()) > 0) throw std::invalid_argument("contains_integer: lo > hi");
  BigInt k, k_alt;
  mpfr_get_z(k.get_mpz_t(), lo.lo().get(), MPFR_RNDU);
  mpfr_get_z(k_alt.get_mpz_t(), lo.hi().get(), MPFR_RNDU);
  if (k != k_alt) throw Undecidable("left endpoint enclosure straddles an integer");

  const int below_lo = mpfr_cmp_z(hi.lo().get(), k.get_mpz_t());  // sign(hi.lo - k)
  const int below_hi = mpfr_cmp_z(hi.hi().get(), k.get_mpz_t());  // sign(hi.hi - k)
  if (half_open) {
    if (below_lo > 0) return k;
    if (below_hi <= 0) return std::nullopt;
  } else {
    if (below_lo >= 0) return k;
    if (below_hi < 0) return std::nullopt;
  }
  throw Undecidable("right endpoint enclosure straddles " + k.get_str());
}

}  // namespace psd
