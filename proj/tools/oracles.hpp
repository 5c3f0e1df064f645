#pragma once

// Independent reference routes used to cross-check the library. None of these
// call into the code paths they check.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

namespace psd::oracle {

/// floor(m^(1/q)) by a floating estimate followed by exact integer correction.
inline mpz_class integer_root(const mpz_class& m, unsigned long q) {
  if (m < 2) return m;
  const double estimate = std::exp(std::log(m.get_d()) / static_cast<double>(q));
  mpz_class k = std::isfinite(estimate) ? mpz_class(std::floor(estimate)) : mpz_class(1);
  if (k < 0) k = 0;
  mpz_class pw;
  for (;;) {
    mpz_pow_ui(pw.get_mpz_t(), k.get_mpz_t(), q);
    if (pw <= m) break;
    --k;
  }
  for (;;) {
    mpz_class next = k + 1;
    mpz_pow_ui(pw.get_mpz_t(), next.get_mpz_t(), q);
    if (pw > m) break;
    k = next;
  }
  return k;
}

/// floor(m^(1/q)) by plain bisection on [0, m].
inline mpz_class integer_root_bisect(const mpz_class& m, unsigned long q) {
  mpz_class lo = 0, hi = m + 1, pw;  // lo^q <= m < hi^q
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    mpz_pow_ui(pw.get_mpz_t(), mid.get_mpz_t(), q);
    if (pw <= m) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// floor(n^(p/q)) through integer_root(n^p, q).
inline mpz_class floor_pow(std::uint64_t n, unsigned long p, unsigned long q) {
  mpz_class base = static_cast<unsigned long>(n), pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), p);
  return integer_root(pw, q);
}

enum class Kind { Trivial, Degenerate, NonTrivial };

struct Triple {
  std::uint64_t r, q1, q2;
  Kind kind;
  friend bool operator<(const Triple& a, const Triple& b) {
    return std::tie(a.r, a.q1, a.q2, a.kind) < std::tie(b.r, b.q1, b.q2, b.kind);
  }
  friend bool operator==(const Triple& a, const Triple& b) {
    return std::tie(a.r, a.q1, a.q2, a.kind) == std::tie(b.r, b.q1, b.q2, b.kind);
  }
};

/// All (r, q1, q2) with r <= N, q1, q2 <= qmax and
/// v[r] = a1 v[q1] + a2 v[q2], for a_i = n_i / d_i. v is 1-based.
inline std::set<Triple> brute_force_pairs(const std::vector<std::int64_t>& v, std::uint64_t N, std::uint64_t qmax,
                                          std::int64_t n1, std::int64_t d1, std::int64_t n2, std::int64_t d2) {
  std::set<Triple> out;
  const bool sum_is_one = n1 * d2 + n2 * d1 == d1 * d2;
  for (std::uint64_t r = 1; r <= N; ++r) {
    const __int128 lhs = static_cast<__int128>(v[r]) * d1 * d2;
    for (std::uint64_t q1 = 1; q1 <= qmax; ++q1) {
      for (std::uint64_t q2 = 1; q2 <= qmax; ++q2) {
        const __int128 rhs = static_cast<__int128>(n1) * d2 * v[q1] + static_cast<__int128>(n2) * d1 * v[q2];
        if (lhs != rhs) continue;
        const bool all_equal = v[r] == v[q1] && v[q1] == v[q2];
        const bool collision = v[r] == v[q1] || v[r] == v[q2] || v[q1] == v[q2];
        Kind kind = Kind::NonTrivial;
        if (sum_is_one && all_equal) {
          kind = Kind::Trivial;
        } else if (collision) {
          kind = Kind::Degenerate;
        }
        out.insert({r, q1, q2, kind});
      }
    }
  }
  return out;
}

}  // namespace psd::oracle
