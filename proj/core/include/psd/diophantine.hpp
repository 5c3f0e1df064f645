#pragma once

// The linear equation y = a_1 x_1 + ... + a_k x_k over the value set of a
// Piatetski-Shapiro sequence: exhaustive search, classification of
// solutions, reduction of collisions, and the Fermat-type counts.

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "psd/numeric.hpp"
#include "psd/ps_seq.hpp"
#include "psd/rigor.hpp"

namespace psd {

class EquationViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidCollision : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CoefficientNotRational : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// y = a_1 x_1 + ... + a_k x_k with exact positive rational a_i.
class LinearEquation {
 public:
  explicit LinearEquation(std::vector<Rational> coeffs);

  /// Comma-separated rationals such as "1/2,1/2". Decimal literals are read
  /// exactly; anything else throws CoefficientNotRational.
  static LinearEquation parse(std::string_view text);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  std::size_t k() const { return coeffs_.size(); }
  Rational sum() const;

 private:
  std::vector<Rational> coeffs_;
};

enum class Classification { Trivial, Degenerate, NonTrivial };

const char* to_string(Classification c);

struct SolutionTuple {
  std::uint64_t r = 0;
  std::vector<std::uint64_t> q;
  BigInt y_value;
  std::vector<BigInt> x_values;
  Classification classification = Classification::NonTrivial;

  /// (r, q) lexicographic.
  friend bool operator<(const SolutionTuple& a, const SolutionTuple& b) {
    return a.r != b.r ? a.r < b.r : a.q < b.q;
  }
  friend bool operator==(const SolutionTuple& a, const SolutionTuple& b) {
    return a.r == b.r && a.q == b.q && a.y_value == b.y_value && a.x_values == b.x_values &&
           a.classification == b.classification;
  }
};

/// Trivial iff sum a_i = 1 and all values coincide; Degenerate iff otherwise
/// some value repeats; NonTrivial else. Throws EquationViolated.
Classification classify_solution(const LinearEquation& eq, const SolutionTuple& tuple);

/// Zero-based collision descriptors.
struct YEqualsX {
  std::size_t i;
};
struct XEqualsX {
  std::size_t i, j;
};
using Collision = std::variant<YEqualsX, XEqualsX>;

/// YEqualsX(i): coefficients a_j / (1 - a_i) for j != i (requires a_i < 1).
/// XEqualsX(i, j): a_i + a_j on the lower position, the other removed.
LinearEquation reduce_equation(const LinearEquation& eq, const Collision& collision);

/// Every value collision present in the tuple.
std::vector<Collision> collisions_of(const SolutionTuple& tuple);

/// The tuple with the duplicated variable removed, matching reduce_equation.
SolutionTuple reduce_solution(const SolutionTuple& tuple, const Collision& collision);

/// Largest q with a_j floor(q^alpha) <= floor(r^alpha) - (sum of the other
/// a_i), i.e. the admissible range for x_j in any solution with this r. It
/// never exceeds floor(a_j^(-1/alpha) r + 1).
std::uint64_t index_bound(const LinearEquation& eq, std::size_t j, const BigInt& y_value, const PsTable& table);

struct SearchOptions {
  int jobs = 1;
  /// Rows of r handled per parallel block.
  std::uint64_t block = 256;
};

/// All tuples with 1 <= r <= N solving floor(r^alpha) = sum a_i floor(q_i^alpha),
/// sorted by (r, q). The last index is recovered by an exact table lookup.
std::vector<SolutionTuple> search_solutions(const LinearEquation& eq, const Alpha& alpha, std::uint64_t N,
                                            const SearchOptions& options = {});

enum class CountMode { SmallestLessThanX, LargestLessThanX };

struct CountOptions {
  int jobs = 1;
  /// Exponent e of the n < x^e truncation in SmallestLessThanX mode; 0 means
  /// ceil(beta) + 1 with beta = 1/(alpha - 1).
  int n_bound_exponent = 0;
};

/// Ordered triples (l, m, n) with floor(l^a) + floor(m^a) = floor(n^a):
/// LargestLessThanX bounds n < x; SmallestLessThanX bounds min(l, m) < x.
std::uint64_t count_fermat(const Alpha& alpha, std::uint64_t x, CountMode mode, const CountOptions& options = {});

struct GrowthModel {
  double beta = 0.0;
  double zeta_beta = 0.0;
  double zeta_error = 0.0;
  double predicted_exponent = 0.0;
  double leading_constant = 0.0;
};

/// beta = 1/(alpha-1), zeta(beta), exponent alpha(beta-1)+1 and constant
/// beta alpha^-beta zeta(beta). Requires 1 < alpha < 2.
GrowthModel growth_model(const Alpha& alpha);

/// Riemann zeta for s > 1 via Euler-Maclaurin; `error` receives a bound on
/// the truncation error.
double zeta(double s, double* error = nullptr);

/// OLS of log(count) against log(x); throws DegenerateFit below 3 points.
LineFit fit_growth_exponent(const std::vector<std::pair<double, double>>& counts);

}  // namespace psd
