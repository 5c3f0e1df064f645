#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "psd/covering_params.hpp"
#include "psd/envelope.hpp"
#include "psd/fast_envelope.hpp"

using namespace psd;

namespace {

Envelope env_of(std::vector<Rational> b, std::vector<Rational> Q) { return Envelope{std::move(b), std::move(Q)}; }

Rational q(long n, long d) {
  Rational v(n, d);
  v.canonicalize();
  return v;
}

double mid(const BoundedReal& v) { return v.midpoint(); }

// Random envelope with k in {1, 2, 3}; mixed forces some Q below and some above 1.
Envelope random_env(std::mt19937_64& rng, bool mixed) {
  std::uniform_int_distribution<int> kd(mixed ? 2 : 1, 3), num(1, 40), den(1, 20);
  const int k = kd(rng);
  Envelope e;
  for (int i = 0; i < k; ++i) {
    e.b.push_back(q(num(rng), den(rng)));
    long n = num(rng), d = 41;
    if (mixed) n = i == 0 ? std::uniform_int_distribution<int>(5, 40)(rng) : std::uniform_int_distribution<int>(42, 120)(rng);
    e.Q.push_back(q(n, d));
  }
  return e;
}

}  // namespace

TEST_CASE("eval_derivative examples") {
  const Envelope pyth = env_of({1, 1}, {q(3, 5), q(4, 5)});
  CHECK(eval_derivative(pyth, 2.0, 0).contains(Rational(1)));

  const Envelope any = env_of({q(1, 3), q(7, 2), 5}, {q(1, 7), q(9, 4), q(5, 3)});
  CHECK(eval_derivative(any, 0.0, 0).contains(Rational(1, 3) + Rational(7, 2) + 5));

  // ln(3/2) - ln 2 from an independent 256-bit evaluation.
  mpfr_t a, b;
  mpfr_inits2(256, a, b, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(a, 1.5, MPFR_RNDN);
  mpfr_log(a, a, MPFR_RNDN);
  mpfr_set_ui(b, 2, MPFR_RNDN);
  mpfr_log(b, b, MPFR_RNDN);
  mpfr_sub(a, a, b, MPFR_RNDN);
  const double expected = mpfr_get_d(a, MPFR_RNDN);
  mpfr_clears(a, b, static_cast<mpfr_ptr>(nullptr));
  const BoundedReal d1 = eval_derivative(env_of({1, 1}, {q(1, 2), q(3, 2)}), 0.0, 1);
  CHECK(std::abs(d1.midpoint() - expected) < 1e-16);
  CHECK(d1.width() < 1e-30);
  CHECK(expected == doctest::Approx(-0.2876820724517809));
}

TEST_CASE("eval_derivative rejects bad input") {
  CHECK_THROWS(eval_derivative(env_of({1}, {q(1, 2)}), 1.0, 3));
  CHECK_THROWS(env_of({}, {}).validate());
  CHECK_THROWS(env_of({1, 0}, {q(1, 2), q(1, 3)}).validate());
  CHECK_THROWS(env_of({1}, {0}).validate());
}

TEST_CASE("critical_point examples") {
  const Envelope e = env_of({1, 1}, {q(1, 2), q(3, 2)});
  const auto c = critical_point(e);
  REQUIRE(c.has_value());
  const double closed_form = std::log(std::log(2.0) / std::log(1.5)) / std::log(3.0);
  CHECK(std::abs(mid(c->u0) - closed_form) < 1e-12);
  CHECK(std::abs(mid(eval_derivative(e, c->u0.midpoint(), 1))) <= 1e-12);

  CHECK_FALSE(critical_point(env_of({1, 1}, {q(3, 5), q(4, 5)})).has_value());
  CHECK_FALSE(critical_point(env_of({1, 1}, {q(6, 5), q(7, 5)})).has_value());

  const auto sym = critical_point(env_of({q(1, 2), q(1, 2)}, {q(1, 2), 2}));
  REQUIRE(sym.has_value());
  CHECK(std::abs(mid(sym->u0)) < 1e-12);
  CHECK(sym->m.contains(Rational(1)));
}

TEST_CASE("critical point is a convex minimum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Envelope e = random_env(rng, true);
    const auto c = critical_point(e, 1e-14, 60.0);
    REQUIRE(c.has_value());
    const double u0 = c->u0.midpoint();
    CHECK(std::abs(mid(eval_derivative(e, u0, 1))) <= 1e-12 * std::max(1.0, mid(eval_derivative(e, u0, 2))));
    CHECK(eval_derivative(e, u0, 2).certainly_positive());
    for (double du : {-10.0, -1.0, 1.0, 10.0}) CHECK_FALSE(eval_derivative(e, u0 + du, 0).certainly_less(c->m));
  }
}

TEST_CASE("invert_on_branch examples") {
  const Envelope pyth = env_of({1, 1}, {q(3, 5), q(4, 5)});
  CHECK(std::abs(mid(invert_on_branch(pyth, 1.0, Branch::Decreasing)) - 2.0) < 1e-13);

  const Envelope e = env_of({1, 1}, {q(1, 2), q(3, 2)});
  const double y = mid(eval_derivative(e, 3.0, 0));
  CHECK(std::abs(mid(invert_on_branch(e, y, Branch::L2)) - 3.0) < 1e-12);

  const double m = mid(critical_point(e)->m);
  CHECK_THROWS_AS(invert_on_branch(e, m - 0.1, Branch::L2), OutOfRange);
  CHECK_THROWS_AS(invert_on_branch(e, m - 0.1, Branch::L1), OutOfRange);
  // Above E(0) = 2 the decreasing branch continues to negative u.
  CHECK(mid(invert_on_branch(pyth, 2.5, Branch::Decreasing)) < 0);
  CHECK_THROWS_AS(invert_on_branch(pyth, -1.0, Branch::Decreasing), OutOfRange);
}

TEST_CASE("inverse branches round trip and stay ordered") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lift(1e-6, 3.0), level(0.05, 0.95);
  for (int trial = 0; trial < 300; ++trial) {
    const Envelope mono = random_env(rng, false);
    if (!mono.has_minimum()) {
      // E decreases from sum b (at u = 0) toward 0 when every Q < 1.
      bool below = true;
      for (const auto& Qi : mono.Q) below &= Qi < 1;
      if (below) {
        const double top = mid(eval_derivative(mono, 0.0, 0));
        const double y = level(rng) * top;
        const double u = mid(invert_on_branch(mono, y, Branch::Decreasing));
        CHECK(std::abs(mid(eval_derivative(mono, u, 0)) - y) <= 1e-12);
      }
    }

    const Envelope e = random_env(rng, true);
    const auto c = critical_point(e, 1e-14, 60.0);
    REQUIRE(c.has_value());
    const double m = mid(c->m);
    const double y2 = m + lift(rng);
    const double u2 = mid(invert_on_branch(e, y2, Branch::L2));
    CHECK(std::abs(mid(eval_derivative(e, u2, 0)) - y2) <= 1e-12 * std::max(1.0, y2));
    CHECK(c->u0.midpoint() <= u2);
    // L1 runs over [0, u0], so its image is [m, E(0)].
    if (c->u0.midpoint() <= 0) {
      CHECK_THROWS_AS(invert_on_branch(e, y2, Branch::L1), OutOfRange);
      continue;
    }
    const double y1 = m + level(rng) * (mid(eval_derivative(e, 0.0, 0)) - m);
    const double u1 = mid(invert_on_branch(e, y1, Branch::L1));
    CHECK(std::abs(mid(eval_derivative(e, u1, 0)) - y1) <= 1e-12 * std::max(1.0, y1));
    CHECK(u1 <= c->u0.midpoint());
    CHECK(mid(invert_on_branch(e, y1, Branch::L2)) >= c->u0.midpoint());
  }
}

TEST_CASE("E is convex and dominates each second-derivative term") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const Envelope e = random_env(rng, trial % 2 == 0);
    for (int i = 0; i < 100; ++i) {
      const double u = -5.0 + 0.2 * i;
      const BoundedReal d2 = eval_derivative(e, u, 2);
      CHECK(d2.certainly_positive());
      for (std::size_t j = 0; j < e.k(); ++j) {
        const Envelope single = env_of({e.b[j]}, {e.Q[j]});
        CHECK_FALSE(d2.certainly_less(eval_derivative(single, u, 2)));
      }
    }
  }
}

TEST_CASE("cover_interval examples") {
  const Envelope pyth = env_of({1, 1}, {q(3, 5), q(4, 5)});
  const CoverInterval J = cover_interval(pyth, 5, 3.5, 1.5, 3.0);
  REQUIRE_FALSE(J.empty);
  CHECK(J.components.size() == 1);
  CHECK(J.certainly_contains(BoundedReal::from_integer(2, 128)));
  CHECK(J.q == std::vector<std::uint64_t>{3, 4});
  CHECK(J.diam > 0);
  CHECK(J.diam < 0.1);

  // m(1/2, 3/2) is about 1.93 > 1 + r^-beta.
  const CoverInterval far = cover_interval(env_of({1, 1}, {q(1, 2), q(3, 2)}), 1000, 2.0, 0.1, 3.0);
  CHECK(far.empty);
  CHECK(far.diam == 0.0);
  CHECK(far.components.empty());

  // 2 * 2^-u = 1 only at u = 1.
  CHECK(cover_interval(env_of({2}, {q(1, 2)}), 10, 4.0, 5.0, 6.0).empty);
  const CoverInterval one = cover_interval(env_of({2}, {q(1, 2)}), 10, 4.0, 0.5, 2.0);
  REQUIRE_FALSE(one.empty);
  CHECK(one.certainly_contains(BoundedReal::from_integer(1, 128)));

  CHECK_THROWS(cover_interval(pyth, 5, 1.0, 1.5, 3.0));
  CHECK_THROWS(cover_interval(pyth, 5, 3.5, 3.0, 1.5));
}

TEST_CASE("cover_interval is sound and agrees with the fast route") {
  const double beta = 4.0, s = 4.5, t = 5.0;
  int nonempty = 0;
  for (std::uint64_t r = 20; r <= 60; r += 4) {
    for (std::uint64_t q1 = 1; q1 < r; q1 += 3) {
      for (std::uint64_t q2 = r + 1; q2 < 2 * r; q2 += 2) {
        const std::vector<Rational> b = {q(1, 2), q(1, 2)};
        const std::vector<std::uint64_t> qs = {q1, q2};
        const Envelope e = Envelope::from_indices(b, qs, r);
        const CoverInterval J = cover_interval(e, r, beta, s, t);
        const double bd[2] = {0.5, 0.5};
        const FastEnvelope fe(bd, qs, r);
        const FastCover fc = fe.cover(std::pow(static_cast<long double>(r), -beta), s, t);

        REQUIRE(static_cast<int>(J.components.size()) == fc.count);
        if (J.empty) continue;
        ++nonempty;
        const double eps = std::pow(static_cast<double>(r), -beta);
        for (std::size_t c = 0; c < J.components.size(); ++c) {
          const auto& piece = J.components[c];
          CHECK(piece.lo.lo().to_double() >= s - 1e-15);
          CHECK(piece.hi.hi().to_double() <= t + 1e-15);
          CHECK(std::abs(piece.lo.midpoint() - static_cast<double>(fc.comp[c].lo())) < 1e-9);
          CHECK(std::abs(piece.hi.midpoint() - static_cast<double>(fc.comp[c].hi())) < 1e-9);
          // Interior samples satisfy the window.
          const double a = piece.lo.hi().to_double(MPFR_RNDU), z = piece.hi.lo().to_double(MPFR_RNDD);
          for (int i = 1; i <= 10 && a < z; ++i) {
            const double u = a + (z - a) * i / 11.0;
            const BoundedReal dev = abs(eval_derivative(e, u, 0, 192) - BoundedReal::from_integer(1, 192));
            CHECK(dev.lo().to_double(MPFR_RNDD) <= eps * (1 + 1e-9));
          }
        }
        CHECK(J.diam == doctest::Approx(static_cast<double>(fc.hull_diam())).epsilon(1e-6).scale(1e-12));
      }
    }
  }
  CHECK(nonempty > 0);
}

TEST_CASE("classify_case examples") {
  CoveringParams p;
  p.b = {1, 1};
  p.beta = 4.5;
  p.s = 5;
  p.t = 6;
  p.gamma = 20;
  CHECK(classify_case({3, 4}, 5, p) == CaseTag::Case1);
  CHECK(classify_case({7, 9}, 5, p) == CaseTag::Case2);

  // The sub-case must agree with the rigorous critical point.
  const CaseTag tag = classify_case({3, 8}, 5, p);
  const auto c = critical_point(env_of({1, 1}, {q(3, 5), q(8, 5)}), 1e-14, p.gamma);
  REQUIRE(c.has_value());
  const double u0 = c->u0.midpoint();
  if (u0 < p.beta) {
    CHECK(tag == CaseTag::Case31);
  } else if (u0 > p.gamma) {
    CHECK(tag == CaseTag::Case32);
  } else {
    CHECK((tag == CaseTag::Case331 || tag == CaseTag::Case332 || tag == CaseTag::Case333));
  }
  CHECK(tag == CaseTag::Case31);  // u0 is about 0.63

  CHECK_THROWS(classify_case({5, 8}, 5, p));
  CHECK_THROWS(classify_case({3}, 5, p));
  CHECK(case_code(CaseTag::Case333) == 333);
  CHECK(std::string(to_string(CaseTag::Case31)) == "Case31");
}

TEST_CASE("pruning_bound examples") {
  CHECK(pruning_bound(1, 4, 8) == doctest::Approx(1.0));
  CHECK(pruning_bound(q(1, 2), 4, 8) == doctest::Approx(std::pow(2.0, 0.25)));
  CHECK(pruning_bound(4, 4, 8) == doctest::Approx(std::pow(4.0, -0.125)));
}
