#pragma once

// Prefixes of the Piatetski-Shapiro sequence floor(n^alpha) and exact
// membership in its value set.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "psd/rigor.hpp"

namespace psd {

struct PSTerm {
  std::uint64_t n = 0;
  BigInt value;
};

struct GenerationOptions {
  int jobs = 1;
  /// ps_range refuses to materialize more terms than this; use ps_stream.
  std::uint64_t materialize_limit = 10'000'000;
  PrecisionPolicy precision = PrecisionPolicy::from_environment();
};

/// Terms n = 1..N in increasing order.
std::vector<PSTerm> ps_range(const Alpha& alpha, std::uint64_t N, const GenerationOptions& options = {});

/// Streams terms n = first..last in increasing order without holding them all.
void ps_stream(const Alpha& alpha, std::uint64_t first, std::uint64_t last,
               const std::function<void(const PSTerm&)>& sink, const GenerationOptions& options = {});

/// The n with floor(n^alpha) == m, if any. Decided through the preimage
/// [m^(1/alpha), (m+1)^(1/alpha)); an undecidable enclosure falls back to an
/// exact floor_pow check of the candidates.
std::optional<BigInt> is_member(const BigInt& m, const Alpha& alpha, const PrecisionPolicy& policy = {});

/// Exact table of floor(n^alpha) for n = 1..size(), indexed from 1. Lookups
/// take a hint and gallop from it, so monotone query sequences are cheap.
class PsTable {
 public:
  PsTable(Alpha alpha, std::uint64_t N, int jobs = 1);

  const Alpha& alpha() const { return alpha_; }
  std::uint64_t size() const { return values_.size() - 1; }
  const BigInt& operator[](std::uint64_t n) const { return values_[n]; }
  const BigInt& back() const { return values_.back(); }

  /// Extends the table until it contains a value > v (or reaches `cap` terms).
  void extend_past(const BigInt& v, std::uint64_t cap);

  /// n with value n == v, or 0 when v is not in the table's range of values.
  /// `hint` is read as a starting index and updated to the insertion point.
  std::uint64_t index_of(const BigInt& v, std::uint64_t& hint) const;
  std::uint64_t index_of(const BigInt& v) const {
    std::uint64_t hint = 1;
    return index_of(v, hint);
  }

  /// Largest n <= size() with value n <= v (0 if none).
  std::uint64_t count_at_most(const BigInt& v) const;

 private:
  Alpha alpha_;
  int jobs_;
  std::vector<BigInt> values_;  // values_[0] is an unused sentinel
};

}  // namespace psd
