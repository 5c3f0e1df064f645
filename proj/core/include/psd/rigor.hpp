#pragma once

// Exact integers, exact rationals, and outward-rounded dyadic enclosures.
//
// Every real quantity that feeds a floor, a membership decision, or a root
// bracket is carried as a BoundedReal: a pair of MPFR numbers [lo, hi] that
// is guaranteed to contain the exact value. Each arithmetic step rounds lo
// toward -inf and hi toward +inf.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace psd {

using BigInt = mpz_class;
using Rational = mpq_class;

class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Undecidable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAlpha : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Precision schedule for adaptive evaluations: start at `initial_bits` and
/// double until `max_bits`.
struct PrecisionPolicy {
  int initial_bits = 64;
  int max_bits = 4096;

  /// Defaults, with max_bits overridden by PSD_MAX_PRECISION_BITS when set.
  static PrecisionPolicy from_environment();
};

/// Parses "p/q", a plain integer, or a decimal literal such as "-1.25" into
/// an exact rational. Returns nullopt for anything else.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

/// The exponent of a Piatetski-Shapiro sequence: a non-integral real > 1,
/// held exactly. Decimal inputs keep their digits for display but are
/// evaluated through the same exact rational.
class Alpha {
 public:
  enum class Kind { ExactRational, Decimal };

  static Alpha rational(const BigInt& numer, const BigInt& denom);
  static Alpha decimal(std::string_view digits_with_point);
  /// "p/q" -> ExactRational, "3.25" -> Decimal. Throws InvalidAlpha.
  static Alpha parse(std::string_view text);

  Kind kind() const { return kind_; }
  const Rational& value() const { return value_; }
  const BigInt& numer() const { return value_.get_num(); }
  const BigInt& denom() const { return value_.get_den(); }
  double to_double() const { return value_.get_d(); }
  /// "p/q" for rationals, the original decimal literal otherwise.
  std::string text() const;

 private:
  Alpha(Kind kind, Rational value, std::string decimal_text);

  Kind kind_;
  Rational value_;
  std::string decimal_text_;
};

/// RAII owner of one mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits = 64);
  Mpfr(const Mpfr& other);
  Mpfr(Mpfr&& other) noexcept;
  Mpfr& operator=(const Mpfr& other);
  Mpfr& operator=(Mpfr&& other) noexcept;
  ~Mpfr();

  static Mpfr from_double(double v, mpfr_prec_t bits);
  static Mpfr from_long_double(long double v, mpfr_prec_t bits);

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  long double to_long_double(mpfr_rnd_t rnd = MPFR_RNDN) const {
    return mpfr_get_ld(value_, rnd);
  }
  /// Scientific notation with `digits` significant digits, rounded per `rnd`.
  std::string to_string(mpfr_rnd_t rnd = MPFR_RNDN, int digits = 25) const;

 private:
  mpfr_t value_;
};

/// A closed interval [lo, hi] with dyadic endpoints that contains an exact
/// real. `precision_bits` is the precision the endpoints were rounded to.
class BoundedReal {
 public:
  BoundedReal(Mpfr lo, Mpfr hi, int precision_bits);

  static BoundedReal point(double v, int bits);
  static BoundedReal point(const Mpfr& v, int bits);
  static BoundedReal from_integer(const BigInt& v, int bits);
  static BoundedReal from_rational(const Rational& v, int bits);

  const Mpfr& lo() const { return lo_; }
  const Mpfr& hi() const { return hi_; }
  int precision_bits() const { return bits_; }

  /// Upper bound on hi - lo.
  double width() const;
  double midpoint() const;
  Mpfr mid() const;

  bool contains(const BoundedReal& inner) const;
  bool contains(const Rational& v) const;
  bool contains(double v) const;

  bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
  /// Certainly lo > other.hi.
  bool certainly_greater(const BoundedReal& other) const;
  bool certainly_less(const BoundedReal& other) const { return other.certainly_greater(*this); }

  /// Outward re-rounding to fewer bits.
  BoundedReal rounded_to(int bits) const;

  BoundedReal operator-() const;
  friend BoundedReal operator+(const BoundedReal& a, const BoundedReal& b);
  friend BoundedReal operator-(const BoundedReal& a, const BoundedReal& b);
  friend BoundedReal operator*(const BoundedReal& a, const BoundedReal& b);
  /// Requires b to exclude zero.
  friend BoundedReal operator/(const BoundedReal& a, const BoundedReal& b);

 private:
  Mpfr lo_;
  Mpfr hi_;
  int bits_;
};

BoundedReal exp(const BoundedReal& x);
/// Requires x.lo > 0.
BoundedReal log(const BoundedReal& x);
/// |x| as an enclosure.
BoundedReal abs(const BoundedReal& x);

/// Enclosure of n^alpha whose width is at most 2^-(bits - ceil(log2 n^alpha) - 4).
BoundedReal eval_pow_interval(const BigInt& n, const Alpha& alpha, int precision_bits);

/// The unique k >= 0 with k^q <= m < (k+1)^q.
BigInt nth_root_floor(const BigInt& m, unsigned long q);

/// floor(n^alpha). Exact rationals go through nth_root_floor(n^p, q);
/// decimals through the adaptive enclosure loop. Throws PrecisionExhausted.
BigInt floor_pow(const BigInt& n, const Alpha& alpha, const PrecisionPolicy& policy = {});

/// The adaptive enclosure route regardless of alpha's kind. Used as the
/// second route when checking exact floors.
BigInt floor_pow_adaptive(const BigInt& n, const Alpha& alpha, const PrecisionPolicy& policy = {});

/// Least integer in [lo, hi) (half_open) or [lo, hi], where each endpoint is
/// itself an enclosure. Throws Undecidable when the endpoint enclosures
/// overlap the deciding integer boundary.
std::optional<BigInt> contains_integer(const BoundedReal& lo, const BoundedReal& hi, bool half_open);

}  // namespace psd
