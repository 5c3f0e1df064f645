#include <doctest.h>

#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "psd/diophantine.hpp"

using namespace psd;

namespace {

std::vector<std::int64_t> prefix(const Alpha& a, std::uint64_t n) {
  std::vector<std::int64_t> v(n + 1, 0);
  for (std::uint64_t i = 1; i <= n; ++i) v[i] = oracle::floor_pow(i, a.numer().get_ui(), a.denom().get_ui()).get_si();
  return v;
}

oracle::Kind kind_of(Classification c) {
  switch (c) {
    case Classification::Trivial: return oracle::Kind::Trivial;
    case Classification::Degenerate: return oracle::Kind::Degenerate;
    default: return oracle::Kind::NonTrivial;
  }
}

SolutionTuple tuple_of(long y, std::vector<long> xs) {
  SolutionTuple t;
  t.y_value = y;
  for (long x : xs) t.x_values.emplace_back(x);
  t.q.assign(xs.size(), 0);
  return t;
}

bool satisfies(const LinearEquation& eq, const SolutionTuple& t) {
  Rational rhs = 0;
  for (std::size_t i = 0; i < eq.k(); ++i) rhs += eq.coeffs()[i] * Rational(t.x_values[i]);
  return rhs == Rational(t.y_value);
}

}  // namespace

TEST_CASE("LinearEquation parsing") {
  const auto eq = LinearEquation::parse("1/2,1/4,0.25");
  CHECK(eq.k() == 3);
  CHECK(eq.coeffs()[2] == Rational(1, 4));
  CHECK(eq.sum() == Rational(1));
  CHECK(LinearEquation::parse("2/4").coeffs()[0] == Rational(1, 2));
  CHECK_THROWS_AS(LinearEquation::parse("1,pi"), CoefficientNotRational);
  CHECK_THROWS(LinearEquation::parse("1,-1"));
  CHECK_THROWS(LinearEquation::parse("1,0"));
  CHECK_THROWS(LinearEquation::parse(""));
}

TEST_CASE("classify_solution examples") {
  const auto half = LinearEquation::parse("1/2,1/2");
  CHECK(classify_solution(half, tuple_of(5, {5, 5})) == Classification::Trivial);
  CHECK(classify_solution(LinearEquation::parse("1,1"), tuple_of(25, {9, 16})) == Classification::NonTrivial);
  CHECK(classify_solution(LinearEquation::parse("1/2,1/4"), tuple_of(3, {4, 4})) == Classification::Degenerate);
  // y = x_1 with the weights summing to 1 but not all equal.
  CHECK(classify_solution(half, tuple_of(5, {5, 5})) != Classification::Degenerate);
  CHECK(classify_solution(LinearEquation::parse("1/2,1/2"), tuple_of(5, {2, 8})) == Classification::NonTrivial);
  CHECK_THROWS_AS(classify_solution(half, tuple_of(5, {2, 9})), EquationViolated);
}

TEST_CASE("Pythagorean triples solve y = x_1 + x_2 over squares") {
  const auto eq = LinearEquation::parse("1,1");
  int checked = 0;
  for (long a = 2; a <= 40; ++a) {
    for (long b = 1; b < a; ++b) {
      const long x1 = (a * a - b * b) * (a * a - b * b), x2 = (2 * a * b) * (2 * a * b);
      const long y = (a * a + b * b) * (a * a + b * b);
      const auto t = tuple_of(y, {x1, x2});
      REQUIRE(satisfies(eq, t));
      CHECK(classify_solution(eq, t) == Classification::NonTrivial);
      ++checked;
    }
  }
  CHECK(checked == 780);
}

TEST_CASE("reduce_equation examples") {
  const auto a = LinearEquation::parse("1/2,1/4");
  CHECK(reduce_equation(a, YEqualsX{1}).coeffs() == std::vector<Rational>{Rational(2, 3)});
  CHECK(reduce_equation(LinearEquation::parse("1,1"), XEqualsX{0, 1}).coeffs() == std::vector<Rational>{Rational(2)});
  CHECK(reduce_equation(LinearEquation::parse("1/2,1/2"), YEqualsX{0}).coeffs() == std::vector<Rational>{Rational(1)});
  CHECK(reduce_equation(LinearEquation::parse("1/2,1/3,1/6"), XEqualsX{0, 2}).coeffs() ==
        std::vector<Rational>{Rational(2, 3), Rational(1, 3)});
  CHECK_THROWS_AS(reduce_equation(LinearEquation::parse("1,1"), YEqualsX{0}), InvalidCollision);
  CHECK_THROWS_AS(reduce_equation(a, XEqualsX{1, 1}), InvalidCollision);
}

TEST_CASE("search matches brute force for k = 2") {
  struct Case {
    const char* coeffs;
    const char* alpha;
    std::uint64_t N;
    std::int64_t n1, d1, n2, d2;
  };
  for (const Case& c : {Case{"1/2,1/2", "3/2", 50, 1, 2, 1, 2}, Case{"1,1", "3/2", 200, 1, 1, 1, 1},
                        Case{"1,2", "7/5", 120, 1, 1, 2, 1}, Case{"1/3,2/3", "5/3", 120, 1, 3, 2, 3}}) {
    CAPTURE(c.coeffs);
    CAPTURE(c.alpha);
    const Alpha a = Alpha::parse(c.alpha);
    const auto eq = LinearEquation::parse(c.coeffs);
    const auto got = search_solutions(eq, a, c.N);
    const std::uint64_t qmax = 3 * c.N + 3;
    const auto brute = oracle::brute_force_pairs(prefix(a, qmax), c.N, qmax, c.n1, c.d1, c.n2, c.d2);
    std::set<oracle::Triple> found;
    for (const auto& s : got) found.insert({s.r, s.q[0], s.q[1], kind_of(s.classification)});
    CHECK(found.size() == got.size());
    CHECK(found == brute);
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("search matches brute force for k = 3") {
  const Alpha a = Alpha::parse("7/5");
  const auto eq = LinearEquation::parse("1/2,1/3,1/6");
  constexpr std::uint64_t N = 30, qmax = 120;
  const auto v = prefix(a, qmax);
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>> brute;
  for (std::uint64_t r = 1; r <= N; ++r) {
    for (std::uint64_t i = 1; i <= qmax; ++i) {
      for (std::uint64_t j = 1; j <= qmax; ++j) {
        const std::int64_t rest = 6 * v[r] - 3 * v[i] - 2 * v[j];
        if (rest <= 0) continue;
        for (std::uint64_t l = 1; l <= qmax && v[l] <= rest; ++l) {
          if (v[l] == rest) brute.insert({r, i, j, l});
        }
      }
    }
  }
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>> found;
  for (const auto& s : search_solutions(eq, a, N)) found.insert({s.r, s.q[0], s.q[1], s.q[2]});
  CHECK(found == brute);
  CHECK(!found.empty());
}

TEST_CASE("search does not depend on jobs") {
  const Alpha a = Alpha::parse("3/2");
  const auto eq = LinearEquation::parse("1/2,1/2");
  SearchOptions parallel;
  parallel.jobs = 4;
  parallel.block = 7;
  CHECK(search_solutions(eq, a, 300) == search_solutions(eq, a, 300, parallel));
}

TEST_CASE("no non-trivial solutions of x + y = z at alpha = 7/2") {
  const auto got = search_solutions(LinearEquation::parse("1,1"), Alpha::parse("7/2"), 1000);
  for (const auto& s : got) CHECK(s.classification == Classification::Trivial);
}

TEST_CASE("solutions are partitioned and reduce soundly") {
  for (const char* coeffs : {"1/2,1/2", "1/2,1/4", "1,1", "1/3,1/3,1/3"}) {
    const auto eq = LinearEquation::parse(coeffs);
    const Alpha a = Alpha::parse("3/2");
    const auto got = search_solutions(eq, a, eq.k() == 3 ? 40 : 150);
    const bool sum_one = eq.sum() == 1;
    std::size_t degenerate = 0;
    for (const auto& s : got) {
      CAPTURE(coeffs);
      CAPTURE(s.r);
      REQUIRE(satisfies(eq, s));
      CHECK(s.y_value == floor_pow(static_cast<unsigned long>(s.r), a));

      std::set<BigInt> distinct(s.x_values.begin(), s.x_values.end());
      distinct.insert(s.y_value);
      const bool all_equal = distinct.size() == 1;
      const bool collision = distinct.size() < s.x_values.size() + 1;
      const Classification expected = sum_one && all_equal ? Classification::Trivial
                                      : collision          ? Classification::Degenerate
                                                           : Classification::NonTrivial;
      CHECK(s.classification == expected);
      CHECK(collisions_of(s).empty() == !collision);

      if (s.classification != Classification::Degenerate) continue;
      ++degenerate;
      for (const auto& c : collisions_of(s)) {
        if (const auto* y = std::get_if<YEqualsX>(&c); y && eq.coeffs()[y->i] >= 1) continue;
        const auto reduced_eq = reduce_equation(eq, c);
        const auto reduced = reduce_solution(s, c);
        CHECK(reduced.x_values.size() == reduced_eq.k());
        CHECK(satisfies(reduced_eq, reduced));
      }
    }
    if (std::string(coeffs) != "1,1") CHECK(degenerate + got.size() > 0);
  }
}

TEST_CASE("pruning bound never loses a solution") {
  const Alpha a = Alpha::parse("7/5");
  const auto eq = LinearEquation::parse("1/2,1/2");
  constexpr std::uint64_t N = 150, qmax = 600;
  PsTable table(a, qmax);
  const auto brute = oracle::brute_force_pairs(prefix(a, qmax), N, qmax, 1, 2, 1, 2);
  REQUIRE(!brute.empty());
  for (const auto& t : brute) {
    const BigInt y = table[t.r];
    const std::uint64_t b0 = index_bound(eq, 0, y, table), b1 = index_bound(eq, 1, y, table);
    CHECK(t.q1 <= b0);
    CHECK(t.q2 <= b1);
    const double cap = std::floor(std::pow(2.0, 1.0 / 1.4) * static_cast<double>(t.r) + 1.0);
    CHECK(static_cast<double>(b0) <= cap);
  }
}

TEST_CASE("count_fermat agrees with a triple loop") {
  const Alpha a = Alpha::parse("3/2");
  CHECK(count_fermat(a, 2, CountMode::LargestLessThanX) == 0);

  const auto v = prefix(a, 1000);
  for (std::uint64_t x : {10ul, 50ul, 120ul}) {
    std::uint64_t largest = 0;
    for (std::uint64_t n = 1; n < x; ++n)
      for (std::uint64_t l = 1; l < n; ++l)
        for (std::uint64_t m = 1; m < n; ++m) largest += v[l] + v[m] == v[n];
    CHECK(count_fermat(a, x, CountMode::LargestLessThanX) == largest);
    CountOptions jobs;
    jobs.jobs = 3;
    CHECK(count_fermat(a, x, CountMode::LargestLessThanX, jobs) == largest);
  }

  // min(l, m) < x and n < x^2.
  for (std::uint64_t x : {5ul, 12ul, 30ul}) {
    const std::uint64_t nmax = x * x;
    std::uint64_t smallest = 0;
    for (std::uint64_t n = 1; n < nmax; ++n)
      for (std::uint64_t l = 1; l < n; ++l)
        for (std::uint64_t m = 1; m < n; ++m) smallest += (std::min(l, m) < x) && v[l] + v[m] == v[n];
    CountOptions opts;
    opts.n_bound_exponent = 2;
    CHECK(count_fermat(a, x, CountMode::SmallestLessThanX, opts) == smallest);
  }
}

TEST_CASE("zeta and the growth model") {
  double err = 1.0;
  const double z2 = zeta(2.0, &err);
  CHECK(std::abs(z2 - M_PI * M_PI / 6.0) < 1e-12);
  CHECK(err <= 1e-10);
  CHECK(std::abs(zeta(3.0) - 1.2020569031595942) < 1e-12);
  CHECK(std::abs(zeta(4.0) - std::pow(M_PI, 4) / 90.0) < 1e-12);
  CHECK_THROWS(zeta(1.0));

  const auto g = growth_model(Alpha::parse("3/2"));
  CHECK(g.beta == doctest::Approx(2.0));
  CHECK(g.predicted_exponent == doctest::Approx(2.5));
  CHECK(g.leading_constant == doctest::Approx(2.0 * (4.0 / 9.0) * M_PI * M_PI / 6.0).epsilon(1e-12));
  CHECK_THROWS(growth_model(Alpha::parse("5/2")));
}

TEST_CASE("fit_growth_exponent examples") {
  const auto line = fit_growth_exponent({{10, 100}, {100, 10000}, {1000, 1000000}});
  CHECK(line.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(line.residual < 1e-9);
  CHECK(fit_growth_exponent({{10, 5}, {20, 5}, {40, 5}}).slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_growth_exponent({{10, 100}, {100, 10000}}), DegenerateFit);
}
