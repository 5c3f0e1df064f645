#pragma once

// The envelope E(u; Q) = b_1 Q_1^u + ... + b_k Q_k^u: rigorous evaluation of
// E, E' and E'', its critical point, inverse branches and the covering
// interval J(q; r) = {u in [s, t] : |E(u) - 1| <= r^-beta}.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "psd/covering_params.hpp"
#include "psd/rigor.hpp"

namespace psd {

class OutOfRange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Envelope {
  std::vector<Rational> b;
  std::vector<Rational> Q;

  /// Q_i = q_i / r.
  static Envelope from_indices(const std::vector<Rational>& b, const std::vector<std::uint64_t>& q, std::uint64_t r);

  std::size_t k() const { return b.size(); }
  bool has_minimum() const;
  /// Throws std::invalid_argument unless k >= 1 and all b_i, Q_i > 0.
  void validate() const;
};

/// Enclosure of E (order 0), E' = sum b Q^u ln Q (order 1) or
/// E'' = sum b Q^u (ln Q)^2 (order 2) at u.
BoundedReal eval_derivative(const Envelope& env, const BoundedReal& u, int order, int bits = 128);
BoundedReal eval_derivative(const Envelope& env, double u, int order, int bits = 128);

struct CriticalData {
  BoundedReal u0;
  BoundedReal m;
};

/// The unique minimiser of E when some Q_i < 1 and some Q_j > 1; nullopt
/// otherwise. Bracketed from [-2, 2 gamma], expanded geometrically, then
/// bisected on the certified sign of E' until the bracket is below `tol`.
std::optional<CriticalData> critical_point(const Envelope& env, double tol = 1e-13, double gamma = 8.0,
                                           int bits = 128);

/// Decreasing: the inverse of a monotone E (all Q_i < 1; the mirrored
/// all-Q_i > 1 case is accepted). L1: the decreasing branch on [0, u0].
/// L2: the increasing branch on [u0, inf).
enum class Branch { Decreasing, L1, L2 };

const char* to_string(Branch b);

/// Bracket of the u with E(u) = y on the branch, refined by bisection until
/// |E(mid) - y| <= 1e-15 max(1, |y|) or 200 steps. Throws OutOfRange when y
/// is outside the branch's image.
BoundedReal invert_on_branch(const Envelope& env, double y, Branch branch, int bits = 128);

enum class CaseTag { Case1, Case2, Case31, Case32, Case331, Case332, Case333 };

const char* to_string(CaseTag tag);
/// Integer code 1, 2, 31, 32, 331, 332, 333.
int case_code(CaseTag tag);

struct CoverPiece {
  BoundedReal lo;
  BoundedReal hi;
};

struct CoverInterval {
  std::vector<std::uint64_t> q;
  std::uint64_t r = 0;
  bool empty = true;
  /// At most two components in increasing order; their union is J.
  std::vector<CoverPiece> components;
  /// Upper bounds on the diameter of each component and of the hull.
  std::vector<double> component_diams;
  double diam = 0.0;
  std::optional<CaseTag> tag;

  /// The hull endpoints; requires !empty.
  const BoundedReal& lo() const { return components.front().lo; }
  const BoundedReal& hi() const { return components.back().hi; }
  /// u certainly lies in one component (using the inner endpoint bounds).
  bool certainly_contains(const BoundedReal& u) const;
  /// u may lie in one component (using the outer endpoint bounds).
  bool may_contain(double u) const;
};

/// J = {u in [s, t] : |E(u) - 1| <= r^-beta}, as outward enclosures. Needs
/// beta > 1, s < t and r >= 2. q is filled when every Q_i r is an integer.
CoverInterval cover_interval(const Envelope& env, std::uint64_t r, double beta, double s, double t);

/// Case tag of (q, r): the sign pattern of q_j - r, then u0 against
/// (beta, gamma) and m against 1 - X(r) and 1 + r^-beta. Boundary ties go to
/// the neighbouring case with the larger diameter bound.
CaseTag classify_case(const std::vector<std::uint64_t>& q, std::uint64_t r, const CoveringParams& params);

}  // namespace psd
