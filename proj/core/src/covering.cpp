#include "psd/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psd/numeric.hpp"
#include "psd/parallel.hpp"

namespace psd {

// ---------------------------------------------------------------- records

double CoverRecord::premeasure_term(double sigma) const {
  if (cover.empty()) return 0.0;
  if (tag == CaseTag::Case333 && cover.count == 2) {
    return std::pow(static_cast<double>(cover.comp[0].diam()), sigma) +
           std::pow(static_cast<double>(cover.comp[1].diam()), sigma);
  }
  return std::pow(diam(), sigma);
}

double CoverRecord::bounded_diam() const {
  if (cover.empty()) return 0.0;
  if (tag == CaseTag::Case333 && cover.count == 2) {
    return static_cast<double>(std::max(cover.comp[0].diam(), cover.comp[1].diam()));
  }
  return diam();
}

IndexRange index_range(std::uint64_t r, bool upper, double B) {
  if (!upper) return {1, r - 1};
  const double top = std::ceil(B * static_cast<double>(r)) - 1.0;
  if (top < static_cast<double>(r + 1)) return {r + 1, r};
  return {r + 1, static_cast<std::uint64_t>(top)};
}

// ---------------------------------------------------------------- enumeration

namespace {

class RowEnumerator {
 public:
  RowEnumerator(const CoveringParams& params, const EnumerateOptions& options)
      : params_(params), options_(options), k_(params.k()), b_(params.b_double()) {
    for (const auto& bj : params.b) B_.push_back(pruning_bound(bj, params.beta, params.gamma));
    lqbuf_.resize(k_);
    q_.resize(k_);
    ranges_.resize(k_);
  }

  template <class Sink>
  void run(std::uint64_t r, Sink&& sink) {
    r_ = r;
    eps_ = static_cast<long double>(params_.eps(r));
    X_ = static_cast<long double>(params_.X(r));
    std::uint64_t qmax = r;
    for (double B : B_) qmax = std::max(qmax, index_range(r, true, B).last);
    lq_.resize(qmax + 1);
    const long double rr = static_cast<long double>(r);
    for (std::uint64_t q = 1; q <= qmax; ++q) {
      lq_[q] = std::log1p((static_cast<long double>(q) - rr) / rr);
    }
    for (std::uint32_t nu = 0; nu < (1u << k_); ++nu) {
      bool empty = false;
      for (std::size_t j = 0; j < k_; ++j) {
        const bool upper = (nu >> (k_ - 1 - j)) & 1u;
        ranges_[j] = index_range(r, upper, B_[j]);
        empty |= ranges_[j].empty();
      }
      if (empty) continue;
      nu_ = nu;
      descend(0, sink);
    }
  }

 private:
  void set_last(std::uint64_t q) {
    q_[k_ - 1] = q;
    lqbuf_[k_ - 1] = lq_[q];
    fe_.assign_logs(b_, lqbuf_);
  }

  template <class Sink>
  void emit(Sink& sink) {
    CoverRecord rec;
    rec.r = r_;
    rec.nu = nu_;
    rec.q = q_;
    const auto cls = fe_.classify(params_.beta, params_.gamma, eps_, X_);
    rec.tag = cls.tag;
    rec.critical = cls.critical;
    rec.cover = fe_.cover(eps_, params_.s, params_.t, cls.critical);
    if (!options_.include_empty && rec.cover.empty()) return;
    sink(std::move(rec));
  }

  template <class Sink>
  void descend(std::size_t j, Sink& sink) {
    const IndexRange range = ranges_[j];
    if (j + 1 < k_) {
      for (std::uint64_t q = range.first; q <= range.last; ++q) {
        q_[j] = q;
        lqbuf_[j] = lq_[q];
        descend(j + 1, sink);
      }
      return;
    }
    if (options_.include_empty) {
      for (std::uint64_t q = range.first; q <= range.last; ++q) {
        set_last(q);
        emit(sink);
      }
      return;
    }
    // min and max of E over [s, t] are nondecreasing in q_k, so the q_k with
    // max E >= 1 - eps and min E <= 1 + eps form an interval.
    const long double s = params_.s, t = params_.t;
    auto reaches_low = [&](std::uint64_t q) {
      set_last(q);
      long double lo, hi;
      fe_.range_on(s, t, lo, hi);
      return hi >= 1 - eps_;
    };
    auto reaches_high = [&](std::uint64_t q) {
      set_last(q);
      long double lo, hi;
      fe_.range_on(s, t, lo, hi);
      return lo <= 1 + eps_;
    };
    std::uint64_t a = range.first, b = range.last + 1;  // first q in [a, b) with reaches_low
    while (a < b) {
      std::uint64_t mid = a + (b - a) / 2;
      if (reaches_low(mid)) {
        b = mid;
      } else {
        a = mid + 1;
      }
    }
    const std::uint64_t q_lo = a;
    if (q_lo > range.last || !reaches_high(q_lo)) return;
    a = q_lo;
    b = range.last;  // last q in [a, b] with reaches_high
    while (a < b) {
      std::uint64_t mid = a + (b - a + 1) / 2;
      if (reaches_high(mid)) {
        a = mid;
      } else {
        b = mid - 1;
      }
    }
    for (std::uint64_t q = q_lo; q <= a; ++q) {
      set_last(q);
      emit(sink);
    }
  }

  const CoveringParams& params_;
  const EnumerateOptions& options_;
  std::size_t k_;
  std::vector<double> b_;
  std::vector<double> B_;
  std::vector<long double> lq_;
  std::vector<long double> lqbuf_;
  std::vector<std::uint64_t> q_;
  std::vector<IndexRange> ranges_;
  FastEnvelope fe_;
  std::uint64_t r_ = 0;
  std::uint32_t nu_ = 0;
  long double eps_ = 0, X_ = 0;
};

}  // namespace

void for_each_cover(const CoveringParams& params, const EnumerateOptions& options,
                    const std::function<void(const CoverRecord&)>& sink) {
  if (params.k() == 0 || params.k() > 16) throw std::invalid_argument("covering needs 1 <= k <= 16");
  const int jobs = resolve_jobs(options.jobs);
  if (jobs <= 1) {
    RowEnumerator rows(params, options);
    for (std::uint64_t r = params.M; r <= params.R; ++r) rows.run(r, [&](CoverRecord&& rec) { sink(rec); });
    return;
  }
  const std::uint64_t block = std::max<std::uint64_t>(options.block, 1);
  const std::uint64_t chunk = block * static_cast<std::uint64_t>(jobs) * 2;
  for (std::uint64_t start = params.M; start <= params.R; start += chunk) {
    const std::uint64_t stop = std::min(params.R, start + chunk - 1);
    const std::size_t blocks = static_cast<std::size_t>((stop - start + block) / block);
    auto parts = ordered_block_map<std::vector<CoverRecord>>(blocks, jobs, [&](std::size_t i) {
      std::vector<CoverRecord> out;
      RowEnumerator rows(params, options);
      const std::uint64_t a = start + i * block;
      const std::uint64_t b = std::min(stop, a + block - 1);
      for (std::uint64_t r = a; r <= b; ++r) rows.run(r, [&](CoverRecord&& rec) { out.push_back(std::move(rec)); });
      return out;
    });
    for (const auto& part : parts) {
      for (const auto& rec : part) sink(rec);
    }
  }
}

std::vector<CoverRecord> enumerate_covering(const CoveringParams& params, const EnumerateOptions& options) {
  std::vector<CoverRecord> out;
  for_each_cover(params, options, [&](const CoverRecord& rec) { out.push_back(rec); });
  return out;
}

// ---------------------------------------------------------------- premeasure

PremeasureAccumulator::PremeasureAccumulator(std::vector<double> sigmas, std::uint64_t M, std::uint64_t R)
    : sigmas_(std::move(sigmas)), M_(M), R_(std::max(M, R)) {
  pending_.resize(sigmas_.size());
  per_r_.assign(sigmas_.size(), std::vector<double>(R_ - M_ + 1, 0.0));
}

void PremeasureAccumulator::flush() {
  if (!current_r_) return;
  const std::uint64_t r = *current_r_;
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    if (r >= M_ && r <= R_) per_r_[i][r - M_] += pairwise_sum(pending_[i]);
    pending_[i].clear();
  }
  current_r_.reset();
}

void PremeasureAccumulator::add(const CoverRecord& rec) {
  if (current_r_ && *current_r_ != rec.r) flush();
  current_r_ = rec.r;
  if (rec.empty()) return;
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    const double term = rec.premeasure_term(sigmas_[i]);
    if (term > 0.0) pending_[i].push_back(term);
  }
}

void PremeasureAccumulator::finish() { flush(); }

std::vector<PremeasureReport> PremeasureAccumulator::reports() const {
  std::vector<PremeasureReport> out;
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    PremeasureReport rep;
    rep.sigma = sigmas_[i];
    const auto& v = per_r_[i];
    for (std::uint64_t r = M_; r <= R_; ++r) rep.per_r_sums.emplace_back(r, v[r - M_]);
    rep.cumulative = pairwise_sum(v);
    // Backward running sum: adding non-negative terms keeps it monotone.
    std::vector<std::pair<std::uint64_t, double>> tails(v.size());
    long double acc = 0;
    for (std::size_t j = v.size(); j-- > 0;) {
      acc += v[j];
      tails[j] = {M_ + j, static_cast<double>(acc)};
    }
    rep.tail_estimates = std::move(tails);
    out.push_back(std::move(rep));
  }
  return out;
}

PremeasureReport partial_premeasure(const std::vector<CoverRecord>& stream, double sigma) {
  if (stream.empty()) return PremeasureReport{sigma, {}, 0.0, {}};
  std::uint64_t lo = stream.front().r, hi = stream.front().r;
  for (const auto& rec : stream) {
    lo = std::min(lo, rec.r);
    hi = std::max(hi, rec.r);
  }
  PremeasureAccumulator acc({sigma}, lo, hi);
  for (const auto& rec : stream) acc.add(rec);
  acc.finish();
  return acc.reports().front();
}

// ---------------------------------------------------------------- diameter bounds

namespace {

// |log(q / r)| computed without cancellation for q near r.
double abs_log_ratio(std::uint64_t q, std::uint64_t r) {
  const double d = (static_cast<double>(q) - static_cast<double>(r)) / static_cast<double>(r);
  return std::abs(std::log1p(d));
}

std::uint64_t pivot_index(const std::vector<std::uint64_t>& q, std::uint64_t r) {
  for (std::size_t j = q.size(); j-- > 0;) {
    if (q[j] > r) return q[j];
  }
  return q.back();
}

}  // namespace

double diam_bound(const CoverRecord& rec, const CoveringParams& params) {
  const std::uint64_t r = rec.r;
  const double rd = static_cast<double>(r);
  const double eps = params.eps(r);
  switch (rec.tag) {
    case CaseTag::Case1: {
      const auto qmax = *std::max_element(rec.q.begin(), rec.q.end());
      return eps / abs_log_ratio(qmax, r);
    }
    case CaseTag::Case2: {
      const auto qmin = *std::min_element(rec.q.begin(), rec.q.end());
      return eps / abs_log_ratio(qmin, r);
    }
    case CaseTag::Case31:
    case CaseTag::Case32: {
      const double L = abs_log_ratio(pivot_index(rec.q, r), r);
      return eps / (L * L);
    }
    case CaseTag::Case331:
      return rd * std::sqrt(params.X(r));
    case CaseTag::Case332:
      return 0.0;
    case CaseTag::Case333: {
      const double L = abs_log_ratio(pivot_index(rec.q, r), r);
      const double m = rec.critical ? static_cast<double>(rec.critical->m) : 1.0;
      const double bk = params.b_k();
      const double ell = std::floor((1.0 - m) * 2.0 * rd / bk);
      if (ell < 1.0) return eps * std::log(rd) / params.X(r) / (L * L);
      return eps * rd * std::log(rd) / ell / (L * L);
    }
  }
  return 0.0;
}

double CaseConstant::sup_over(std::uint64_t lo, std::uint64_t hi) const {
  double best = 0.0;
  for (auto it = per_r_max.lower_bound(lo); it != per_r_max.end() && it->first <= hi; ++it) {
    best = std::max(best, it->second);
  }
  return best;
}

void DiamBoundAccumulator::add(const CoverRecord& rec) {
  CaseConstant& c = cases_[rec.tag];
  ++c.count;
  const double d = rec.bounded_diam();
  c.max_diam = std::max(c.max_diam, d);
  if (rec.empty()) return;
  ++c.nonempty;
  const double bound = diam_bound(rec, params_);
  if (!(bound > 0.0)) return;
  const double ratio = d / bound;
  auto& slot = c.per_r_max[rec.r];
  slot = std::max(slot, ratio);
  if (ratio > c.max_ratio) {
    c.max_ratio = ratio;
    c.witness_r = rec.r;
    c.witness_q = rec.q;
  }
}

std::map<CaseTag, CaseConstant> diam_bound_report(const std::vector<CoverRecord>& stream,
                                                  const CoveringParams& params) {
  DiamBoundAccumulator acc(params);
  for (const auto& rec : stream) acc.add(rec);
  return acc.report();
}

// ---------------------------------------------------------------- dimension

double threshold_reference(const CoveringParams& params) {
  const double k = static_cast<double>(params.k());
  Rational total = 0;
  bool all_large = true;
  for (const auto& v : params.b) {
    total += v;
    all_large &= v >= 1;
  }
  if (all_large || total < 1 || params.beta <= 4.0) return (k + 1.0) / params.beta;
  return 3.0 * k / (params.beta - 4.0);
}

std::vector<double> default_sigma_grid(const CoveringParams& params) {
  const double thr = threshold_reference(params);
  const double lo = 0.5 * thr, hi = std::min(1.0, 2.0 * thr);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(lo + (hi - lo) * i / 20.0);
  return grid;
}

double top_decade_slope(const std::vector<std::pair<std::uint64_t, double>>& per_r, double log_power) {
  if (per_r.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double R = static_cast<double>(per_r.back().first);
  std::vector<std::pair<double, double>> pts;
  for (const auto& [r, v] : per_r) {
    const double rd = static_cast<double>(r);
    if (rd >= R / 10.0 && v > 0.0 && rd > 1.0) pts.emplace_back(rd, v * std::pow(std::log(rd), -log_power));
  }
  try {
    return log_log_fit(pts, 2).slope;
  } catch (const DegenerateFit&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

DimensionDiagnostic dimension_diagnostic(const CoveringParams& params, const std::vector<double>& sigma_grid,
                                         const std::vector<std::uint64_t>& truncation_grid,
                                         const EnumerateOptions& options) {
  if (sigma_grid.empty() || truncation_grid.empty()) throw std::invalid_argument("grids must be nonempty");
  DimensionDiagnostic out;
  out.sigma_grid = sigma_grid;
  out.truncation_grid = truncation_grid;
  std::sort(out.truncation_grid.begin(), out.truncation_grid.end());
  out.threshold_reference = threshold_reference(params);

  CoveringParams p = params;
  p.R = out.truncation_grid.back();
  PremeasureAccumulator acc(sigma_grid, p.M, p.R);
  EnumerateOptions opts = options;
  opts.include_empty = false;
  for_each_cover(p, opts, [&](const CoverRecord& rec) { acc.add(rec); });
  acc.finish();

  for (const auto& rep : acc.reports()) {
    std::vector<double> row;
    for (auto R : out.truncation_grid) {
      std::vector<double> prefix;
      for (const auto& [r, v] : rep.per_r_sums) {
        if (r <= R) prefix.push_back(v);
      }
      row.push_back(pairwise_sum(prefix));
    }
    out.sums.push_back(std::move(row));
    const double slope = top_decade_slope(rep.per_r_sums);
    out.slopes.push_back(slope);
    out.slopes_log_sigma.push_back(top_decade_slope(rep.per_r_sums, rep.sigma));
    out.slopes_log_sigma1.push_back(top_decade_slope(rep.per_r_sums, rep.sigma + 1.0));
    // No positive contribution at all counts as convergent (the sum is 0).
    out.convergent_like.push_back(std::isnan(slope) ? rep.cumulative == 0.0 : slope < -1.0);
  }
  return out;
}

// ---------------------------------------------------------------- inclusion

const char* to_string(InclusionKind kind) {
  switch (kind) {
    case InclusionKind::Covered: return "Covered";
    case InclusionKind::DiophantineFails: return "DiophantineFails";
    case InclusionKind::BelowM: return "BelowM";
    case InclusionKind::Uncovered: return "Uncovered";
  }
  return "?";
}

InclusionResult verify_inclusion(const SolutionTuple& solution, const LinearEquation& eq, const Alpha& alpha,
                                 const CoveringParams& params) {
  InclusionResult out;
  const double a = alpha.to_double();
  if (a < params.s || a > params.t) throw std::invalid_argument("verify_inclusion: alpha must lie in [s, t]");
  const std::uint64_t r = solution.r;
  out.window = params.eps(std::max<std::uint64_t>(r, 2));
  if (r < params.M) {
    out.kind = InclusionKind::BelowM;
    return out;
  }

  // y = x_i means q_i = r, which the envelope excludes; fold it away first.
  LinearEquation cur = eq;
  SolutionTuple sol = solution;
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i < sol.q.size(); ++i) {
      if (sol.q[i] == r) {
        if (sol.q.size() == 1) {
          out.kind = InclusionKind::DiophantineFails;
          out.reduced = true;
          return out;
        }
        cur = reduce_equation(cur, YEqualsX{i});
        sol = reduce_solution(sol, YEqualsX{i});
        out.reduced = again = true;
        break;
      }
    }
  }

  const Envelope env = Envelope::from_indices(cur.coeffs(), sol.q, r);
  const int bits = std::max(128, static_cast<int>(std::ceil(params.beta * std::log2(static_cast<double>(r)))) + 96);
  const BoundedReal u = BoundedReal::from_rational(alpha.value(), bits);
  const BoundedReal dev = abs(eval_derivative(env, u, 0, bits) - BoundedReal::from_integer(1, bits));
  const BoundedReal eps =
      exp(-(BoundedReal::point(params.beta, bits) * log(BoundedReal::from_integer(BigInt(r), bits))));
  out.deviation = dev.midpoint();
  if (!eps.certainly_greater(dev) && !(mpfr_cmp(dev.hi().get(), eps.lo().get()) == 0)) {
    out.kind = InclusionKind::DiophantineFails;
    return out;
  }

  const CoverInterval J = cover_interval(env, r, params.beta, params.s, params.t);
  CoveringParams reduced = params;
  reduced.b = cur.coeffs();
  out.tag = classify_case(sol.q, r, reduced);
  bool inside = false;
  for (const auto& c : J.components) {
    if (mpfr_cmp(c.lo.lo().get(), u.lo().get()) <= 0 && mpfr_cmp(u.hi().get(), c.hi.hi().get()) <= 0) inside = true;
  }
  out.kind = inside ? InclusionKind::Covered : InclusionKind::Uncovered;
  return out;
}

// ---------------------------------------------------------------- spacing and log sums

double spacing_check(const std::vector<Rational>& b, const std::vector<Rational>& Q_prefix, std::uint64_t r,
                     const std::vector<std::uint64_t>& p_list, const CoveringParams& params) {
  if (b.size() != Q_prefix.size() + 1) throw std::invalid_argument("spacing_check: need k-1 prefix ratios");
  std::vector<std::uint64_t> ps = p_list;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  std::vector<double> minima;
  for (auto p : ps) {
    Envelope env;
    env.b = b;
    env.Q = Q_prefix;
    Rational last{BigInt(p), BigInt(r)};
    last.canonicalize();
    env.Q.push_back(last);
    auto crit = critical_point(env, 1e-15, params.gamma);
    if (!crit) continue;
    const double u0 = crit->u0.midpoint();
    if (u0 > params.beta && u0 < params.gamma) minima.push_back(crit->m.midpoint());
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < minima.size(); ++i) best = std::min(best, minima[i] - minima[i - 1]);
  return best;
}

LogSum log_sum_check(std::uint64_t r, double sigma, double B) {
  if (r < 2 || !(sigma > 0.0) || !(B > 1.0)) throw std::invalid_argument("log_sum_check: need r >= 2, sigma > 0, B > 1");
  const double rd = static_cast<double>(r);
  std::vector<double> below, above;
  below.reserve(r);
  for (std::uint64_t q = 1; q < r; ++q) below.push_back(std::pow(abs_log_ratio(q, r), -sigma));
  const double top = B * rd;
  for (std::uint64_t q = r + 1; static_cast<double>(q) < top; ++q) above.push_back(std::pow(abs_log_ratio(q, r), -sigma));
  LogSum out;
  out.below = pairwise_sum(below);
  out.above = pairwise_sum(above);
  out.rhs = rd + (std::abs(sigma - 1.0) < 1e-12 ? rd * std::log(rd) : 0.0) + std::pow(rd, sigma);
  return out;
}

}  // namespace psd
