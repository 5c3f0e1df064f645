#pragma once

// Covering families J(q; r) over r in [M, R], nu in {0,1}^k and q in I^nu,
// with premeasure partial sums, empirical diameter-bound constants,
// dimension diagnostics, inclusion checks on concrete solutions, the
// minima spacing check and the log-sum check.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "psd/covering_params.hpp"
#include "psd/diophantine.hpp"
#include "psd/envelope.hpp"
#include "psd/fast_envelope.hpp"

namespace psd {

struct CoverRecord {
  std::uint64_t r = 0;
  /// nu_j is bit (k-1-j), so ascending masks are lexicographic in nu.
  std::uint32_t nu = 0;
  std::vector<std::uint64_t> q;
  CaseTag tag = CaseTag::Case1;
  FastCover cover;
  std::optional<FastCritical> critical;

  bool empty() const { return cover.empty(); }
  /// Diameter of the hull of J.
  double diam() const { return static_cast<double>(cover.hull_diam()); }
  /// Contribution to the premeasure: split Case333 sets count each
  /// branch component, everything else counts the hull.
  double premeasure_term(double sigma) const;
  /// The diameter the case bound applies to (largest component for Case333).
  double bounded_diam() const;
};

struct EnumerateOptions {
  /// When false, q_k is restricted by a monotone bracket to the values with
  /// nonempty J; empty sets contribute nothing to sums or ratios.
  bool include_empty = true;
  int jobs = 1;
  /// Radii handled per parallel block.
  std::uint64_t block = 16;
};

/// I_j^(0)(r) = [1, r) and I_j^(1)(r) = (r, B_j r) as inclusive ranges.
struct IndexRange {
  std::uint64_t first = 1;
  std::uint64_t last = 0;
  bool empty() const { return last < first; }
  std::uint64_t size() const { return empty() ? 0 : last - first + 1; }
};
IndexRange index_range(std::uint64_t r, bool upper, double B);

/// Streams every J(q; r) in (r, nu, q) lexicographic order. With jobs > 1,
/// blocks of radii are computed in parallel and delivered in order.
void for_each_cover(const CoveringParams& params, const EnumerateOptions& options,
                    const std::function<void(const CoverRecord&)>& sink);

std::vector<CoverRecord> enumerate_covering(const CoveringParams& params, const EnumerateOptions& options = {});

struct PremeasureReport {
  double sigma = 1.0;
  std::vector<std::pair<std::uint64_t, double>> per_r_sums;
  double cumulative = 0.0;
  /// (M', sum of per-r contributions over r >= M').
  std::vector<std::pair<std::uint64_t, double>> tail_estimates;
};

/// Per-radius pairwise sums of (diam)^sigma for several sigma at once over
/// the radii [M, R]. Zero terms are skipped, so the sums do not depend on
/// whether empty sets were enumerated.
class PremeasureAccumulator {
 public:
  PremeasureAccumulator(std::vector<double> sigmas, std::uint64_t M, std::uint64_t R);
  void add(const CoverRecord& rec);
  /// Closes the radius currently being accumulated (also done implicitly
  /// when a record for a new radius arrives).
  void finish();
  std::vector<PremeasureReport> reports() const;
  const std::vector<double>& sigmas() const { return sigmas_; }

 private:
  void flush();

  std::vector<double> sigmas_;
  std::uint64_t M_, R_;
  std::optional<std::uint64_t> current_r_;
  std::vector<std::vector<double>> pending_;  // [sigma][term]
  std::vector<std::vector<double>> per_r_;    // [sigma][r - M]
};

PremeasureReport partial_premeasure(const std::vector<CoverRecord>& stream, double sigma);

/// The diameter bound expression of each case; 0 for Case332.
double diam_bound(const CoverRecord& rec, const CoveringParams& params);

struct CaseConstant {
  std::uint64_t count = 0;
  std::uint64_t nonempty = 0;
  double max_ratio = 0.0;
  double max_diam = 0.0;
  std::uint64_t witness_r = 0;
  std::vector<std::uint64_t> witness_q;
  /// Per-radius maximum of diam / bound over nonempty intervals.
  std::map<std::uint64_t, double> per_r_max;

  /// Largest per-radius ratio with r in [lo, hi].
  double sup_over(std::uint64_t lo, std::uint64_t hi) const;
};

class DiamBoundAccumulator {
 public:
  explicit DiamBoundAccumulator(const CoveringParams& params) : params_(params) {}
  void add(const CoverRecord& rec);
  const std::map<CaseTag, CaseConstant>& report() const { return cases_; }

 private:
  const CoveringParams& params_;
  std::map<CaseTag, CaseConstant> cases_;
};

std::map<CaseTag, CaseConstant> diam_bound_report(const std::vector<CoverRecord>& stream,
                                                  const CoveringParams& params);

struct DimensionDiagnostic {
  std::vector<double> sigma_grid;
  std::vector<std::uint64_t> truncation_grid;
  /// sums[i][j]: cumulative premeasure at sigma_grid[i] up to truncation_grid[j].
  std::vector<std::vector<double>> sums;
  /// Fitted log-log slope of the per-r contribution over the top decade.
  std::vector<double> slopes;
  /// Same fit after dividing by (log r)^sigma and (log r)^(sigma+1).
  std::vector<double> slopes_log_sigma;
  std::vector<double> slopes_log_sigma1;
  std::vector<bool> convergent_like;
  double threshold_reference = 0.0;
};

/// (k+1)/beta when only the monotone regimes occur (all b_i >= 1, or
/// sum b_i < 1), else 3k/(beta - 4).
double threshold_reference(const CoveringParams& params);

/// 21 points over [0.5 thr, min(1, 2 thr)].
std::vector<double> default_sigma_grid(const CoveringParams& params);

DimensionDiagnostic dimension_diagnostic(const CoveringParams& params, const std::vector<double>& sigma_grid,
                                         const std::vector<std::uint64_t>& truncation_grid,
                                         const EnumerateOptions& options = {});

/// Slope over the top decade [R/10, R] of r -> contribution(r), and the
/// verdict slope < -1. Returns NaN when fewer than two positive points.
double top_decade_slope(const std::vector<std::pair<std::uint64_t, double>>& per_r, double log_power = 0.0);

enum class InclusionKind { Covered, DiophantineFails, BelowM, Uncovered };

const char* to_string(InclusionKind kind);

struct InclusionResult {
  InclusionKind kind = InclusionKind::BelowM;
  std::optional<CaseTag> tag;
  /// |E(alpha; q/r) - 1| (midpoint) and r^-beta.
  double deviation = 0.0;
  double window = 0.0;
  /// A y = x_i collision was reduced before building the envelope.
  bool reduced = false;
};

/// Checks |E(alpha; q/r) - 1| <= r^-beta rigorously with the equation's
/// coefficients as weights and, when it holds and r >= M, that alpha lies in
/// J(q; r). Uncovered would indicate a bug. Requires alpha in [s, t].
InclusionResult verify_inclusion(const SolutionTuple& solution, const LinearEquation& eq, const Alpha& alpha,
                                 const CoveringParams& params);

/// Minimum over consecutive admissible p' < p (u0 in (beta, gamma)) of
/// m(Q_prefix, p/r) - m(Q_prefix, p'/r); +inf when fewer than two are admissible.
double spacing_check(const std::vector<Rational>& b, const std::vector<Rational>& Q_prefix, std::uint64_t r,
                     const std::vector<std::uint64_t>& p_list, const CoveringParams& params);

struct LogSum {
  /// sum over 1 <= q < r of log(r/q)^-sigma.
  double below = 0.0;
  /// sum over r < q < B r of log(q/r)^-sigma.
  double above = 0.0;
  /// r + [sigma = 1] r log r + r^sigma.
  double rhs = 0.0;
};

LogSum log_sum_check(std::uint64_t r, double sigma, double B);

}  // namespace psd
