#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "psd/ps_seq.hpp"

using namespace psd;

namespace {

std::vector<long> values_of(const std::vector<PSTerm>& terms) {
  std::vector<long> out;
  for (const auto& t : terms) out.push_back(t.value.get_si());
  return out;
}

}  // namespace

TEST_CASE("ps_range examples") {
  CHECK(values_of(ps_range(Alpha::parse("3/2"), 5)) == std::vector<long>{1, 2, 5, 8, 11});
  CHECK(values_of(ps_range(Alpha::parse("5/2"), 3)) == std::vector<long>{1, 5, 15});
  for (const char* text : {"3/2", "7/5", "3.1416"}) CHECK(values_of(ps_range(Alpha::parse(text), 1)) == std::vector<long>{1});
}

TEST_CASE("ps_range is strictly increasing and matches the oracle") {
  for (const char* text : {"3/2", "7/5", "5/2", "7/3"}) {
    const Alpha a = Alpha::parse(text);
    const auto terms = ps_range(a, 5000);
    REQUIRE(terms.size() == 5000);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      CHECK(terms[i].n == i + 1);
      CHECK(terms[i].value == oracle::floor_pow(i + 1, a.numer().get_ui(), a.denom().get_ui()));
      if (i > 0) CHECK(terms[i].value > terms[i - 1].value);
    }
  }
}

TEST_CASE("ps_range does not depend on jobs") {
  const Alpha a = Alpha::parse("7/5");
  GenerationOptions serial, parallel;
  parallel.jobs = 4;
  const auto x = ps_range(a, 20000, serial), y = ps_range(a, 20000, parallel);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i].value == y[i].value);
}

TEST_CASE("ps_range refuses oversized prefixes") {
  GenerationOptions opts;
  opts.materialize_limit = 100;
  CHECK_THROWS(ps_range(Alpha::parse("3/2"), 101, opts));
  CHECK(ps_range(Alpha::parse("3/2"), 100, opts).size() == 100);
}

TEST_CASE("ps_stream delivers a window in order") {
  const Alpha a = Alpha::parse("5/2");
  const auto full = ps_range(a, 300);
  std::vector<PSTerm> got;
  GenerationOptions opts;
  opts.jobs = 3;
  ps_stream(a, 101, 300, [&](const PSTerm& t) { got.push_back(t); }, opts);
  REQUIRE(got.size() == 200);
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].n == 101 + i);
    CHECK(got[i].value == full[100 + i].value);
  }
}

TEST_CASE("is_member examples") {
  const Alpha a = Alpha::parse("3/2");
  CHECK(is_member(11, a) == BigInt(5));
  CHECK_FALSE(is_member(3, a).has_value());
  CHECK(is_member(1, a) == BigInt(1));
  CHECK(is_member(1, Alpha::parse("3.1416")) == BigInt(1));
  CHECK_THROWS_AS(is_member(0, a), std::invalid_argument);
  CHECK_THROWS_AS(is_member(-7, a), std::invalid_argument);
}

TEST_CASE("is_member round trip") {
  for (const char* text : {"3/2", "7/5", "5/2", "3.5"}) {
    const Alpha a = Alpha::parse(text);
    for (const auto& t : ps_range(a, 10000)) {
      const auto n = is_member(t.value, a);
      REQUIRE(n.has_value());
      CHECK(*n == t.n);
    }
  }
}

TEST_CASE("is_member completeness against the prefix") {
  for (const char* text : {"3/2", "7/5", "7/3"}) {
    const Alpha a = Alpha::parse(text);
    const auto terms = ps_range(a, 120);
    std::set<long> in_prefix;
    for (const auto& t : terms) in_prefix.insert(t.value.get_si());
    const long top = terms.back().value.get_si();
    for (long m = 1; m <= top; ++m) {
      CAPTURE(text);
      CAPTURE(m);
      CHECK(is_member(m, a).has_value() == (in_prefix.count(m) == 1));
    }
  }
}

TEST_CASE("is_member at exact powers") {
  // 4^(3/2) = 8 and 9^(3/2) = 27 sit exactly on preimage boundaries.
  const Alpha a = Alpha::parse("3/2");
  CHECK(is_member(8, a) == BigInt(4));
  CHECK(is_member(27, a) == BigInt(9));
  CHECK(is_member(BigInt("1000000000000000000000"), Alpha::parse("7/2")) == BigInt(1000000));
}

TEST_CASE("PsTable lookups") {
  const Alpha a = Alpha::parse("3/2");
  PsTable table(a, 200);
  CHECK(table.size() == 200);
  CHECK(table[5] == 11);
  CHECK(table.index_of(11) == 5);
  CHECK(table.index_of(12) == 0);
  CHECK(table.index_of(table.back() + 1) == 0);
  CHECK(table.count_at_most(10) == 4);
  CHECK(table.count_at_most(11) == 5);
  CHECK(table.count_at_most(0) == 0);

  std::uint64_t hint = 1;
  for (std::uint64_t n = 1; n <= 200; ++n) CHECK(table.index_of(table[n], hint) == n);

  const BigInt target = table.back() * 4;
  table.extend_past(target, 100000);
  CHECK(table.back() > target);
  for (std::uint64_t n = 1; n <= table.size(); n += 17) CHECK(table[n] == oracle::floor_pow(n, 3, 2));
}
