#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "oracles.hpp"
#include "psd/rigor.hpp"

using namespace psd;

namespace {

Rational exact(const Mpfr& v) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v.get());
  return q;
}

// lo^2 <= target <= hi^2 in exact arithmetic (both endpoints positive).
bool squares_bracket(const BoundedReal& v, const Rational& target) {
  const Rational lo = exact(v.lo()), hi = exact(v.hi());
  return lo > 0 && lo * lo <= target && target <= hi * hi;
}

BoundedReal closed(double lo, double hi) { return BoundedReal(Mpfr::from_double(lo, 64), Mpfr::from_double(hi, 64), 64); }

}  // namespace

TEST_CASE("alpha parsing") {
  const Alpha a = Alpha::parse("3/2");
  CHECK(a.kind() == Alpha::Kind::ExactRational);
  CHECK(a.value() == Rational(3, 2));
  CHECK(a.text() == "3/2");

  const Alpha d = Alpha::parse("3.1416");
  CHECK(d.kind() == Alpha::Kind::Decimal);
  CHECK(d.value() == Rational(3927, 1250));
  CHECK(d.text() == "3.1416");

  CHECK(Alpha::parse("6/4").value() == Rational(3, 2));
  for (const char* bad : {"2", "2/1", "4/2", "1/2", "1", "0.5", "-3/2", "abc", "", "3/0", "2.0"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Alpha::parse(bad), InvalidAlpha);
  }
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("10/4") == Rational(5, 2));
  CHECK_FALSE(parse_rational("1/0").has_value());
  CHECK_FALSE(parse_rational("x").has_value());
  CHECK(to_string(Rational(5, 2)) == "5/2");
  CHECK(to_string(Rational(3)) == "3");
}

TEST_CASE("nth_root_floor examples") {
  CHECK(nth_root_floor(0, 5) == 0);
  CHECK(nth_root_floor(125, 2) == 11);
  CHECK(nth_root_floor(26, 3) == 2);
  CHECK(nth_root_floor(27, 3) == 3);
  CHECK(nth_root_floor(1, 7) == 1);
}

TEST_CASE("nth_root_floor against bisection") {
  BigInt m = 1;
  for (int i = 0; i < 200; ++i) {
    m = m * 7 + i;
    for (unsigned long q : {2ul, 3ul, 5ul, 7ul}) {
      const BigInt k = nth_root_floor(m, q);
      CHECK(k == oracle::integer_root_bisect(m, q));
    }
  }
}

TEST_CASE("eval_pow_interval examples") {
  const Alpha a = Alpha::parse("3/2");
  const BoundedReal one = eval_pow_interval(1, a, 64);
  CHECK(one.contains(Rational(1)));

  // 5^(3/2) = sqrt(125).
  const BoundedReal v = eval_pow_interval(5, a, 64);
  CHECK(squares_bracket(v, Rational(125)));
  CHECK(std::abs(v.midpoint() - 11.180339887498949) < 1e-14);
  CHECK(v.width() < 1e-15);

  // 2^(7/2) = 8 sqrt(2) = sqrt(128).
  const BoundedReal w = eval_pow_interval(2, Alpha::parse("7/2"), 64);
  CHECK(squares_bracket(w, Rational(128)));
}

TEST_CASE("eval_pow_interval refines monotonically") {
  for (const char* text : {"3/2", "5/2", "7/3", "3.1416"}) {
    const Alpha a = Alpha::parse(text);
    for (unsigned long n : {2ul, 3ul, 10ul, 977ul, 123456ul}) {
      for (int bits : {64, 128, 256}) {
        const BoundedReal coarse = eval_pow_interval(n, a, bits);
        const BoundedReal fine = eval_pow_interval(n, a, 2 * bits);
        CAPTURE(text);
        CAPTURE(n);
        CAPTURE(bits);
        CHECK(coarse.contains(fine));
        CHECK(fine.width() <= coarse.width());
      }
    }
  }
}

TEST_CASE("floor_pow examples") {
  const Alpha a = Alpha::parse("3/2");
  CHECK(floor_pow(4, a) == 8);
  CHECK(floor_pow(5, a) == 11);
  CHECK(floor_pow(2, Alpha::parse("7/2")) == 11);
  CHECK(floor_pow(1, Alpha::parse("3.1416")) == 1);
}

TEST_CASE("floor_pow matches the integer oracle on both routes") {
  for (const char* text : {"3/2", "5/2", "7/3", "11/7"}) {
    const Alpha a = Alpha::parse(text);
    const unsigned long p = a.numer().get_ui(), q = a.denom().get_ui();
    BigInt prev = 0;
    for (std::uint64_t n = 1; n <= 3000; ++n) {
      const BigInt v = floor_pow(static_cast<unsigned long>(n), a);
      REQUIRE(v == oracle::floor_pow(n, p, q));
      CHECK(v >= prev);
      prev = v;
      if (n % 37 == 0) CHECK(floor_pow_adaptive(static_cast<unsigned long>(n), a) == v);
    }
  }
}

TEST_CASE("decimal alpha is evaluated exactly") {
  // 3.5 = 7/2, including the perfect squares where n^3.5 is an integer.
  const Alpha a = Alpha::parse("3.5");
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    CHECK(floor_pow(static_cast<unsigned long>(n), a) == oracle::floor_pow(n, 7, 2));
  }
  CHECK(floor_pow(1000000ul, a) == BigInt("1000000000000000000000"));
}

TEST_CASE("precision ceiling raises PrecisionExhausted") {
  PrecisionPolicy tight;
  tight.max_bits = 64;
  CHECK_THROWS_AS(floor_pow(1000001ul, Alpha::parse("3.5"), tight), PrecisionExhausted);
  CHECK_THROWS_AS(floor_pow_adaptive(1000001ul, Alpha::parse("7/2"), tight), PrecisionExhausted);
  // The exact route has no ceiling.
  CHECK(floor_pow(1000001ul, Alpha::parse("7/2"), tight) == oracle::floor_pow(1000001, 7, 2));
}

TEST_CASE("precision policy reads the environment") {
  ::setenv("PSD_MAX_PRECISION_BITS", "256", 1);
  CHECK(PrecisionPolicy::from_environment().max_bits == 256);
  ::unsetenv("PSD_MAX_PRECISION_BITS");
  CHECK(PrecisionPolicy::from_environment().max_bits == 4096);
}

TEST_CASE("contains_integer examples") {
  CHECK_FALSE(contains_integer(closed(2.1, 2.1), closed(2.9, 2.9), true).has_value());
  CHECK(contains_integer(closed(2.0, 2.0), closed(2.5, 2.5), true) == BigInt(2));
  CHECK_FALSE(contains_integer(closed(11.18, 11.18), closed(11.32, 11.32), true).has_value());
  // Half-open excludes the right end, closed includes it.
  CHECK_FALSE(contains_integer(closed(2.5, 2.5), closed(3.0, 3.0), true).has_value());
  CHECK(contains_integer(closed(2.5, 2.5), closed(3.0, 3.0), false) == BigInt(3));
  CHECK(contains_integer(closed(-1.5, -1.5), closed(0.5, 0.5), true) == BigInt(-1));
}

TEST_CASE("contains_integer refuses to guess") {
  CHECK_THROWS_AS(contains_integer(closed(2.9, 3.1), closed(5.5, 5.5), true), Undecidable);
  CHECK_THROWS_AS(contains_integer(closed(2.1, 2.2), closed(2.9, 3.1), true), Undecidable);
}

TEST_CASE("interval arithmetic encloses exact results") {
  const int bits = 96;
  const BoundedReal third = BoundedReal::from_rational(Rational(1, 3), bits);
  const BoundedReal seven = BoundedReal::from_integer(7, bits);
  CHECK(third.contains(Rational(1, 3)));
  CHECK((third * seven).contains(Rational(7, 3)));
  CHECK((seven / third).contains(Rational(21)));
  CHECK((seven - third).contains(Rational(20, 3)));
  CHECK((-third).contains(Rational(-1, 3)));
  CHECK(abs(-third).contains(Rational(1, 3)));

  // exp(log x) returns to x; both stay narrow.
  const BoundedReal back = exp(log(seven));
  CHECK(back.contains(Rational(7)));
  CHECK(back.width() < 1e-20);
  CHECK_THROWS(log(BoundedReal::from_integer(0, bits)));

  const BoundedReal coarse = third.rounded_to(24);
  CHECK(coarse.contains(third));
  CHECK(BoundedReal::from_integer(3, bits).certainly_greater(BoundedReal::from_rational(Rational(5, 2), bits)));
}

TEST_CASE("leading zeros are decimal, not octal") {
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3.05") == Rational(61, 20));
  CHECK(parse_rational("010/08") == Rational(5, 4));
  CHECK(parse_rational("0010") == Rational(10));
  CHECK(Alpha::parse("1.09").value() == Rational(109, 100));
}
