#include "psd/ps_seq.hpp"

#include <algorithm>

#include "psd/parallel.hpp"

namespace psd {

namespace {

constexpr std::uint64_t kBlock = 4096;

std::vector<BigInt> compute_block(const Alpha& alpha, std::uint64_t first, std::uint64_t last,
                                  const PrecisionPolicy& policy) {
  std::vector<BigInt> out;
  out.reserve(last - first + 1);
  for (std::uint64_t n = first; n <= last; ++n) out.push_back(floor_pow(BigInt(n), alpha, policy));
  return out;
}

// Values for n = first..last, computed in fixed-size blocks across workers
// and concatenated in index order.
std::vector<BigInt> compute_values(const Alpha& alpha, std::uint64_t first, std::uint64_t last, int jobs,
                                   const PrecisionPolicy& policy) {
  if (last < first) return {};
  const std::uint64_t count = last - first + 1;
  const std::size_t blocks = static_cast<std::size_t>((count + kBlock - 1) / kBlock);
  auto parts = ordered_block_map<std::vector<BigInt>>(blocks, jobs, [&](std::size_t i) {
    std::uint64_t a = first + i * kBlock;
    std::uint64_t b = std::min(last, a + kBlock - 1);
    return compute_block(alpha, a, b, policy);
  });
  std::vector<BigInt> out;
  out.reserve(count);
  for (auto& p : parts) {
    for (auto& v : p) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<PSTerm> ps_range(const Alpha& alpha, std::uint64_t N, const GenerationOptions& options) {
  if (N < 1) throw std::invalid_argument("ps_range: N must be >= 1");
  if (N > options.materialize_limit) {
    throw std::length_error("ps_range: N=" + std::to_string(N) + " exceeds materialize_limit; stream instead");
  }
  auto values = compute_values(alpha, 1, N, options.jobs, options.precision);
  std::vector<PSTerm> out;
  out.reserve(N);
  for (std::uint64_t n = 1; n <= N; ++n) out.push_back({n, std::move(values[n - 1])});
  return out;
}

void ps_stream(const Alpha& alpha, std::uint64_t first, std::uint64_t last,
               const std::function<void(const PSTerm&)>& sink, const GenerationOptions& options) {
  if (first < 1) throw std::invalid_argument("ps_stream: first must be >= 1");
  const std::uint64_t chunk = kBlock * static_cast<std::uint64_t>(resolve_jobs(options.jobs)) * 4;
  for (std::uint64_t a = first; a <= last && a >= first; a += chunk) {
    std::uint64_t b = std::min(last, a + chunk - 1);
    auto values = compute_values(alpha, a, b, options.jobs, options.precision);
    for (std::uint64_t n = a; n <= b; ++n) sink(PSTerm{n, std::move(values[n - a])});
    if (b == last) break;
  }
}

std::optional<BigInt> is_member(const BigInt& m, const Alpha& alpha, const PrecisionPolicy& policy) {
  if (m < 1) throw std::invalid_argument("is_member: m must be >= 1");
  const Rational inv_alpha = 1 / alpha.value();
  const int bits = std::max(policy.initial_bits, 32) +
                   static_cast<int>(mpz_sizeinbase(m.get_mpz_t(), 2) / alpha.to_double()) + 8;

  auto root = [&](const BigInt& v) {
    return exp(log(BoundedReal::from_integer(v, bits + 16)) * BoundedReal::from_rational(inv_alpha, bits + 16))
        .rounded_to(bits);
  };
  BoundedReal lo = root(m);
  BoundedReal hi = root(m + 1);
  try {
    return contains_integer(lo, hi, /*half_open=*/true);
  } catch (const Undecidable&) {
    // The enclosures are a few ulps wide, so only a handful of integers can
    // be candidates; decide each one exactly.
    BigInt first, last;
    mpfr_get_z(first.get_mpz_t(), lo.lo().get(), MPFR_RNDD);
    mpfr_get_z(last.get_mpz_t(), hi.hi().get(), MPFR_RNDU);
    for (BigInt k = std::max<BigInt>(first, 1); k <= last; ++k) {
      if (floor_pow(k, alpha, policy) == m) return k;
    }
    return std::nullopt;
  }
}

// ---------------------------------------------------------------- PsTable

PsTable::PsTable(Alpha alpha, std::uint64_t N, int jobs) : alpha_(std::move(alpha)), jobs_(jobs) {
  values_.reserve(N + 1);
  values_.emplace_back(0);
  for (auto& v : compute_values(alpha_, 1, N, jobs_, PrecisionPolicy::from_environment())) {
    values_.push_back(std::move(v));
  }
}

void PsTable::extend_past(const BigInt& v, std::uint64_t cap) {
  const auto policy = PrecisionPolicy::from_environment();
  while (size() < cap && (size() == 0 || values_.back() <= v)) {
    std::uint64_t first = size() + 1;
    std::uint64_t last = std::min(cap, std::max<std::uint64_t>(first + kBlock - 1, 2 * size()));
    for (auto& x : compute_values(alpha_, first, last, jobs_, policy)) values_.push_back(std::move(x));
  }
}

std::uint64_t PsTable::index_of(const BigInt& v, std::uint64_t& hint) const {
  const std::uint64_t n = size();
  if (n == 0) return 0;
  std::uint64_t h = std::clamp<std::uint64_t>(hint, 1, n);
  // Find lo < hi with values[lo] < v <= values[hi] (lo may be 0, hi may be n+1).
  std::uint64_t lo, hi;
  if (values_[h] < v) {
    lo = h;
    std::uint64_t step = 1;
    hi = h + step;
    while (hi <= n && values_[hi] < v) {
      lo = hi;
      step *= 2;
      hi = lo + step;
    }
    hi = std::min(hi, n + 1);
  } else {
    hi = h;
    std::uint64_t step = 1;
    while (true) {
      if (hi <= step) {
        lo = 0;
        break;
      }
      lo = hi - step;
      if (values_[lo] < v) break;
      hi = lo;
      step *= 2;
    }
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (values_[mid] < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  hint = std::min(hi, n);
  return (hi <= n && values_[hi] == v) ? hi : 0;
}

std::uint64_t PsTable::count_at_most(const BigInt& v) const {
  auto it = std::upper_bound(values_.begin() + 1, values_.end(), v);
  return static_cast<std::uint64_t>(it - values_.begin()) - 1;
}

}  // namespace psd
