#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "psd/covering.hpp"
#include "psd/diophantine.hpp"
#include "psd/envelope.hpp"
#include "psd/ps_seq.hpp"
#include "psd/rigor.hpp"

namespace psd::experiments {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// Uniform double in [lo, hi) from the top 53 bits, independent of the
// standard library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }

oracle::Kind to_oracle(Classification c) {
  switch (c) {
    case Classification::Trivial: return oracle::Kind::Trivial;
    case Classification::Degenerate: return oracle::Kind::Degenerate;
    case Classification::NonTrivial: return oracle::Kind::NonTrivial;
  }
  return oracle::Kind::NonTrivial;
}

// Largest absolute distance from y to the enclosure.
double distance_to(const BoundedReal& v, double y) {
  return std::max(std::abs(v.lo().to_double(MPFR_RNDU) - y), std::abs(v.hi().to_double(MPFR_RNDU) - y));
}

double max_abs(const BoundedReal& v) {
  return std::max(std::abs(v.lo().to_double(MPFR_RNDU)), std::abs(v.hi().to_double(MPFR_RNDU)));
}

// ---------------------------------------------------------------- 1

Outcome floor_oracle(const Settings&) {
  Outcome out;
  Stopwatch clock;
  constexpr std::uint64_t kN = 100000;
  std::uint64_t mismatches = 0, adaptive_checked = 0, adaptive_mismatches = 0;
  json per_alpha = json::object();
  for (const char* text : {"3/2", "5/2", "7/3"}) {
    const Alpha alpha = Alpha::parse(text);
    const unsigned long p = alpha.numer().get_ui(), q = alpha.denom().get_ui();
    std::uint64_t bad = 0;
    BigInt pw;
    for (std::uint64_t n = 1; n <= kN; ++n) {
      const BigInt value = floor_pow(BigInt(static_cast<unsigned long>(n)), alpha);
      BigInt base = static_cast<unsigned long>(n);
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), p);
      const bool ok = value == nth_root_floor(pw, q) && value == oracle::integer_root(pw, q);
      bad += ok ? 0 : 1;
      if (n % 97 == 0) {
        ++adaptive_checked;
        adaptive_mismatches += floor_pow_adaptive(base, alpha) == value ? 0 : 1;
      }
    }
    per_alpha[text] = bad;
    mismatches += bad;
  }
  out.seconds = clock.seconds();
  out.time_limit = 60;
  out.pass = mismatches == 0 && adaptive_mismatches == 0 && out.seconds <= out.time_limit;
  out.data = {{"n_max", kN},
              {"mismatches", mismatches},
              {"per_alpha", per_alpha},
              {"adaptive_checked", adaptive_checked},
              {"adaptive_mismatches", adaptive_mismatches}};
  out.summary = "mismatches=" + std::to_string(mismatches) + " over 3 x " + std::to_string(kN) +
                " (adaptive route: " + std::to_string(adaptive_mismatches) + "/" + std::to_string(adaptive_checked) + ")";
  return out;
}

// ---------------------------------------------------------------- 2 and 7

struct SearchCase {
  std::string coeffs;
  std::string alpha;
  std::vector<SolutionTuple> solutions;
  bool equal = false;
  std::size_t brute_size = 0;
};

std::vector<SearchCase> search_cases(const Settings& settings, bool with_oracle) {
  constexpr std::uint64_t kN = 200;
  std::vector<SearchCase> cases;
  for (const char* coeffs : {"1,1", "1/2,1/2"}) {
    for (const char* alpha_text : {"3/2", "7/5"}) {
      SearchCase c{coeffs, alpha_text, {}, false, 0};
      const auto eq = LinearEquation::parse(coeffs);
      const Alpha alpha = Alpha::parse(alpha_text);
      SearchOptions opts;
      opts.jobs = settings.jobs;
      c.solutions = search_solutions(eq, alpha, kN, opts);
      if (with_oracle) {
        // Wider than any pruning bound: a_j x_j <= y forces q_j <= 2^(1/alpha) r + 1 < 2N + 2.
        const std::uint64_t qmax = 2 * kN + 2;
        std::vector<std::int64_t> v(qmax + 1, 0);
        for (const auto& term : ps_range(alpha, qmax)) v[term.n] = term.value.get_si();
        const auto& a = eq.coeffs();
        const auto brute = oracle::brute_force_pairs(v, kN, qmax, a[0].get_num().get_si(), a[0].get_den().get_si(),
                                                     a[1].get_num().get_si(), a[1].get_den().get_si());
        std::set<oracle::Triple> found;
        for (const auto& s : c.solutions) found.insert({s.r, s.q[0], s.q[1], to_oracle(s.classification)});
        c.equal = found == brute && found.size() == c.solutions.size();
        c.brute_size = brute.size();
      }
      cases.push_back(std::move(c));
    }
  }
  return cases;
}

Outcome search_oracle(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  bool all_equal = true;
  json rows = json::array();
  for (const auto& c : search_cases(settings, true)) {
    all_equal &= c.equal;
    rows.push_back({{"coeffs", c.coeffs}, {"alpha", c.alpha}, {"search", c.solutions.size()},
                    {"brute_force", c.brute_size}, {"equal", c.equal}});
  }
  out.seconds = clock.seconds();
  out.time_limit = 120;
  out.pass = all_equal && out.seconds <= out.time_limit;
  out.data = {{"N", 200}, {"cases", rows}};
  std::string sizes;
  for (const auto& row : rows) sizes += (sizes.empty() ? "" : ",") + std::to_string(row["search"].get<std::size_t>());
  out.summary = std::string(all_equal ? "exact set equality" : "MISMATCH") + " on 4 cases (sizes " + sizes + ")";
  return out;
}

CoveringParams soundness_params(const LinearEquation& eq) {
  CoveringParams p;
  p.b = eq.coeffs();
  p.beta = 1.05;
  p.s = 1.2;
  p.t = 1.6;
  p.gamma = 3.0;
  p.M = 10;
  p.R = 200;
  p.validate();
  return p;
}

Outcome covering_soundness(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  std::uint64_t checked = 0, covered = 0, fails = 0, below = 0, uncovered = 0;
  json witnesses = json::array();
  for (const auto& c : search_cases(settings, false)) {
    const auto eq = LinearEquation::parse(c.coeffs);
    const Alpha alpha = Alpha::parse(c.alpha);
    const auto params = soundness_params(eq);
    for (const auto& s : c.solutions) {
      if (s.r < 10 || s.classification == Classification::Trivial) continue;
      ++checked;
      const auto res = verify_inclusion(s, eq, alpha, params);
      switch (res.kind) {
        case InclusionKind::Covered: ++covered; break;
        case InclusionKind::DiophantineFails: ++fails; break;
        case InclusionKind::BelowM: ++below; break;
        case InclusionKind::Uncovered:
          ++uncovered;
          if (witnesses.size() < 5) witnesses.push_back({{"alpha", c.alpha}, {"coeffs", c.coeffs}, {"r", s.r}, {"q", s.q}});
          break;
      }
    }
  }
  out.seconds = clock.seconds();
  out.pass = uncovered == 0 && covered > 0;
  out.data = {{"checked", checked},         {"covered", covered},  {"diophantine_fails", fails},
              {"below_m", below},           {"uncovered", uncovered}, {"uncovered_witnesses", witnesses},
              {"params", {{"beta", 1.05}, {"s", 1.2}, {"t", 1.6}, {"gamma", 3.0}, {"M", 10}}}};
  out.summary = "covered=" + std::to_string(covered) + " inequality-fails=" + std::to_string(fails) +
                " uncovered=" + std::to_string(uncovered) + " of " + std::to_string(checked) + " with r>=10";
  return out;
}

// ---------------------------------------------------------------- 3

Outcome fermat_threshold(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  constexpr std::uint64_t kN = 10000;
  std::uint64_t total = 0;
  json per_alpha = json::object();
  const auto eq = LinearEquation::parse("1,1");
  for (const char* text : {"3.5", "4.5", "5.5", "3.1416"}) {
    SearchOptions opts;
    opts.jobs = settings.jobs;
    std::uint64_t nontrivial = 0;
    for (const auto& s : search_solutions(eq, Alpha::parse(text), kN, opts)) {
      nontrivial += s.classification == Classification::Trivial ? 0 : 1;
    }
    per_alpha[text] = nontrivial;
    total += nontrivial;
  }
  out.seconds = clock.seconds();
  out.time_limit = 600;
  out.pass = total == 0 && out.seconds <= out.time_limit;
  out.data = {{"N", kN}, {"nontrivial", per_alpha}};
  out.summary = "non-trivial solutions up to N=" + std::to_string(kN) + ": " + std::to_string(total) +
                " (alpha = 3.5, 4.5, 5.5, 3.1416)";
  return out;
}

// ---------------------------------------------------------------- 4

Outcome yoshida_growth(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  const Alpha alpha = Alpha::parse("3/2");
  const auto model = growth_model(alpha);
  CountOptions opts;
  opts.jobs = settings.jobs;
  std::vector<std::pair<double, double>> largest, smallest;
  for (std::uint64_t x : {100, 200, 400, 800}) {
    largest.emplace_back(x, static_cast<double>(count_fermat(alpha, x, CountMode::LargestLessThanX, opts)));
  }
  for (std::uint64_t x : {10, 20, 40, 80}) {
    smallest.emplace_back(x, static_cast<double>(count_fermat(alpha, x, CountMode::SmallestLessThanX, opts)));
  }
  const auto fit = fit_growth_exponent(largest);
  const auto ref = fit_growth_exponent(smallest);
  constexpr double kTolerance = 0.3;
  out.seconds = clock.seconds();
  out.time_limit = 600;
  out.pass = std::abs(fit.slope - model.predicted_exponent) <= kTolerance && out.seconds <= out.time_limit;
  out.data = {{"predicted_exponent", model.predicted_exponent},
              {"tolerance", kTolerance},
              {"largest_counts", largest},
              {"largest_slope", fit.slope},
              {"smallest_counts", smallest},
              {"smallest_slope", ref.slope},
              {"zeta_beta", model.zeta_beta},
              {"leading_constant", model.leading_constant}};
  out.summary = "largest-mode slope=" + fmt(fit.slope, 4) + " target " + fmt(model.predicted_exponent, 3) + "+-" +
                fmt(kTolerance, 2) + " (smallest-mode slope " + fmt(ref.slope, 4) + ")";
  return out;
}

// ---------------------------------------------------------------- 5

Outcome ap3_abundance(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  SearchOptions opts;
  opts.jobs = settings.jobs;
  std::uint64_t nontrivial = 0;
  json example;
  for (const auto& s : search_solutions(LinearEquation::parse("1/2,1/2"), Alpha::parse("3/2"), 500, opts)) {
    if (s.classification != Classification::NonTrivial) continue;
    if (nontrivial++ == 0) {
      example = {{"r", s.r}, {"q", s.q}, {"y", s.y_value.get_str()},
                 {"x", {s.x_values[0].get_str(), s.x_values[1].get_str()}}};
    }
  }
  out.seconds = clock.seconds();
  out.time_limit = 60;
  out.pass = nontrivial >= 1 && out.seconds <= out.time_limit;
  out.data = {{"N", 500}, {"nontrivial", nontrivial}, {"example", example}};
  out.summary = "non-trivial 3-APs up to N=500: " + std::to_string(nontrivial);
  if (nontrivial > 0) {
    out.summary += " (first: " + example["x"][0].get<std::string>() + ", " + example["y"].get<std::string>() + ", " +
                   example["x"][1].get<std::string>() + ")";
  }
  return out;
}

// ---------------------------------------------------------------- 6

Outcome envelope_roundtrip(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  constexpr int kTrials = 1000;
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(settings.seed);
  double worst_roundtrip[3] = {0, 0, 0};
  double worst_slope = 0.0;
  std::uint64_t nonconvex = 0, violations = 0, critical_checked = 0;

  auto random_env = [&](bool mixed) {
    Envelope env;
    const std::size_t k = mixed ? pick(rng, 2, 4) : pick(rng, 1, 3);
    for (std::size_t i = 0; i < k; ++i) {
      env.b.emplace_back(static_cast<long>(pick(rng, 1, 200)), 100L);
      std::uint64_t num;
      if (!mixed) {
        num = pick(rng, 1, 99);
      } else if (i == 0) {
        num = pick(rng, 30, 99);
      } else if (i == 1) {
        num = pick(rng, 101, 300);
      } else {
        num = rng() % 2 ? pick(rng, 30, 99) : pick(rng, 101, 300);
      }
      env.Q.emplace_back(static_cast<long>(num), 100L);
      env.b.back().canonicalize();
      env.Q.back().canonicalize();
    }
    return env;
  };

  for (int branch = 0; branch < 3; ++branch) {
    const Branch br = static_cast<Branch>(branch);
    for (int trial = 0; trial < kTrials; ++trial) {
      Envelope env;
      double u = 0.0;
      if (br == Branch::Decreasing) {
        env = random_env(false);
        u = uniform(rng, 0.1, 8.0);
      } else {
        std::optional<CriticalData> crit;
        do {
          env = random_env(true);
          crit = critical_point(env);
        } while (!crit || (br == Branch::L1 && crit->u0.midpoint() < 0.05));
        const double u0 = crit->u0.midpoint();
        ++critical_checked;
        const double slope = max_abs(eval_derivative(env, crit->u0, 1));
        worst_slope = std::max(worst_slope, slope);
        if (!eval_derivative(env, crit->u0, 2).certainly_positive()) ++nonconvex;
        if (slope > kTol) ++violations;
        if (br == Branch::L1) {
          u = uniform(rng, 0.0, u0 * 0.999);
        } else {
          u = uniform(rng, u0 + 1e-3, u0 + 6.0);
        }
      }
      const double y = eval_derivative(env, u, 0).midpoint();
      const BoundedReal L = invert_on_branch(env, y, br);
      const double err = distance_to(eval_derivative(env, L.midpoint(), 0), y);
      worst_roundtrip[branch] = std::max(worst_roundtrip[branch], err);
      if (err > kTol) ++violations;
    }
  }
  out.seconds = clock.seconds();
  out.time_limit = 30;
  out.pass = violations == 0 && nonconvex == 0 && out.seconds <= out.time_limit;
  out.data = {{"trials_per_branch", kTrials},
              {"worst_roundtrip", {{"Decreasing", worst_roundtrip[0]}, {"L1", worst_roundtrip[1]}, {"L2", worst_roundtrip[2]}}},
              {"worst_derivative_at_u0", worst_slope},
              {"critical_points", critical_checked},
              {"nonconvex", nonconvex},
              {"violations", violations},
              {"seed", settings.seed}};
  out.summary = "max |E(L(y))-y|=" +
                fmt(std::max({worst_roundtrip[0], worst_roundtrip[1], worst_roundtrip[2]}), 3) +
                " max |E'(u0)|=" + fmt(worst_slope, 3) + " E''(u0)<=0: " + std::to_string(nonconvex);
  return out;
}

// ---------------------------------------------------------------- 8

Outcome spacing(const Settings&) {
  Outcome out;
  Stopwatch clock;
  CoveringParams params;
  params.b = {Rational(1, 2), Rational(1, 2)};
  params.beta = 4.0;
  params.s = 4.5;
  params.t = 5.0;
  params.gamma = 8.0;
  const double bk = 0.5;
  const double B = pruning_bound(params.b.back(), params.beta, params.gamma);
  std::uint64_t prefixes_with_pairs = 0, violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  json per_r = json::array();
  for (std::uint64_t r : {50, 100, 200}) {
    params.M = 2;
    params.R = r;
    const auto range = index_range(r, true, B);
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = range.first; p <= range.last; ++p) ps.push_back(p);
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::uint64_t q1 = 1; q1 < r; ++q1) {
      Rational Q1{BigInt(static_cast<unsigned long>(q1)), BigInt(static_cast<unsigned long>(r))};
      Q1.canonicalize();
      const double gap = spacing_check(params.b, {Q1}, r, ps, params);
      if (!std::isfinite(gap)) continue;
      ++prefixes_with_pairs;
      min_gap = std::min(min_gap, gap);
      const double margin = gap - bk / static_cast<double>(r);
      worst_margin = std::min(worst_margin, margin);
      if (margin < -1e-12) ++violations;
    }
    per_r.push_back({{"r", r}, {"min_gap", min_gap}, {"bound", bk / static_cast<double>(r)}});
  }
  out.seconds = clock.seconds();
  out.pass = violations == 0 && prefixes_with_pairs > 0;
  out.data = {{"per_r", per_r}, {"prefixes_with_pairs", prefixes_with_pairs}, {"violations", violations},
              {"worst_margin", worst_margin}};
  out.summary = "violations=" + std::to_string(violations) + " over " + std::to_string(prefixes_with_pairs) +
                " prefixes with admissible pairs; min gap-b_k/r=" + fmt(worst_margin, 3);
  return out;
}

// ---------------------------------------------------------------- 9

Outcome diam_constants(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  CoveringParams p;
  p.b = {Rational(1), Rational(1)};
  p.beta = 4.0;
  p.s = 4.5;
  p.t = 4.6;
  p.gamma = 8.0;
  p.M = 3;
  p.R = 2000;
  p.validate();
  EnumerateOptions opts;
  opts.include_empty = false;
  opts.jobs = settings.jobs;
  DiamBoundAccumulator acc(p);
  for_each_cover(p, opts, [&](const CoverRecord& rec) { acc.add(rec); });
  const auto& report = acc.report();
  CaseConstant case1;
  if (auto it = report.find(CaseTag::Case1); it != report.end()) case1 = it->second;
  const double early = case1.sup_over(500, 1000), late = case1.sup_over(1000, 2000);
  const bool finite = std::isfinite(case1.max_ratio) && case1.max_ratio > 0.0;
  const bool stable = finite && late < 1.05 * early;

  // Case332 needs mixed families with m > 1 at u0 in (beta, gamma):
  // b = (1, 1) has no mixed families and b = (1/2, 1/2) keeps m below 1 there.
  CoveringParams p2 = p;
  p2.b = {Rational(2), Rational(1, 2)};
  p2.R = 300;
  p2.warnings.clear();
  p2.validate();
  EnumerateOptions all = opts;
  all.include_empty = true;
  std::uint64_t n332 = 0, n332_nonzero = 0;
  for_each_cover(p2, all, [&](const CoverRecord& rec) {
    if (rec.tag != CaseTag::Case332) return;
    ++n332;
    if (rec.diam() != 0.0) ++n332_nonzero;
  });

  out.seconds = clock.seconds();
  out.time_limit = 600;
  out.pass = stable && n332 > 0 && n332_nonzero == 0 && out.seconds <= out.time_limit;
  out.data = {{"case1_nonempty", case1.nonempty},
              {"case1_max_ratio", case1.max_ratio},
              {"case1_witness", {{"r", case1.witness_r}, {"q", case1.witness_q}}},
              {"sup_500_1000", early},
              {"sup_1000_2000", late},
              {"case332_count", n332},
              {"case332_nonzero_diam", n332_nonzero}};
  out.summary = "Case1 sup ratio [500,1000]=" + fmt(early, 5) + " [1000,2000]=" + fmt(late, 5) + "; Case332 " +
                std::to_string(n332) + " sets, nonzero diam " + std::to_string(n332_nonzero);
  return out;
}

// ---------------------------------------------------------------- 10

Outcome premeasure_phase(const Settings& settings) {
  Outcome out;
  Stopwatch clock;
  CoveringParams p;
  p.b = {Rational(1, 2), Rational(1, 2)};
  p.beta = 14.0;
  p.s = 14.5;
  p.t = 15.0;
  p.gamma = 30.0;
  p.M = 2;
  p.R = 1500;
  p.validate();
  EnumerateOptions opts;
  opts.jobs = settings.jobs;
  const auto diag = dimension_diagnostic(p, {0.2, 0.9}, {150, 750, 1500}, opts);
  const double low = diag.slopes[0], high = diag.slopes[1];
  out.seconds = clock.seconds();
  out.time_limit = 900;
  out.pass = high < -1.0 && low > -1.0 && out.seconds <= out.time_limit;
  out.data = {{"threshold_reference", diag.threshold_reference},
              {"slope_sigma_0.2", low},
              {"slope_sigma_0.9", high},
              {"sums", diag.sums},
              {"truncation_grid", diag.truncation_grid}};
  out.summary = "top-decade slope sigma=0.9: " + fmt(high, 4) + " (< -1), sigma=0.2: " + fmt(low, 4) +
                " (> -1); threshold " + fmt(diag.threshold_reference, 3);
  return out;
}

// ---------------------------------------------------------------- 11

Outcome log_sum(const Settings&) {
  Outcome out;
  Stopwatch clock;
  constexpr double kB = 2.0;
  bool ok = true;
  json per_sigma = json::object();
  std::string summary;
  for (double sigma : {0.5, 1.0, 2.0}) {
    double C = 0.0, worst = 0.0;
    std::uint64_t worst_r = 0, exceed = 0;
    for (std::uint64_t r = 2; r <= 10000; ++r) {
      const auto ls = log_sum_check(r, sigma, kB);
      const double ratio = std::max(ls.below, ls.above) / ls.rhs;
      if (r <= 10) {
        C = std::max(C, ratio);
        continue;
      }
      if (ratio > worst) {
        worst = ratio;
        worst_r = r;
      }
      if (ratio > C) ++exceed;
    }
    ok &= exceed == 0;
    per_sigma[fmt(sigma)] = {{"C", C}, {"max_ratio_after", worst}, {"at_r", worst_r}, {"exceedances", exceed}};
    summary += (summary.empty() ? "" : "; ") + std::string("sigma=") + fmt(sigma) + " C=" + fmt(C, 4) +
               " later max=" + fmt(worst, 4);
  }
  out.seconds = clock.seconds();
  out.time_limit = 60;
  out.pass = ok && out.seconds <= out.time_limit;
  out.data = {{"B", kB}, {"per_sigma", per_sigma}};
  out.summary = summary;
  return out;
}

}  // namespace

const std::vector<std::pair<std::string, int>>& presets() {
  static const std::vector<std::pair<std::string, int>> table = {
      {"floor-oracle", 1},       {"search-oracle", 2},       {"fermat-threshold", 3}, {"yoshida-growth", 4},
      {"ap3-abundance", 5},      {"envelope-roundtrip", 6},  {"covering-soundness", 7}, {"spacing", 8},
      {"diam-constants", 9},     {"premeasure-phase", 10},   {"log-sum", 11}};
  return table;
}

int preset_id(const std::string& name) {
  for (const auto& [n, id] : presets()) {
    if (n == name) return id;
  }
  return 0;
}

Outcome run(int id, const Settings& settings) {
  Outcome out;
  switch (id) {
    case 1: out = floor_oracle(settings); break;
    case 2: out = search_oracle(settings); break;
    case 3: out = fermat_threshold(settings); break;
    case 4: out = yoshida_growth(settings); break;
    case 5: out = ap3_abundance(settings); break;
    case 6: out = envelope_roundtrip(settings); break;
    case 7: out = covering_soundness(settings); break;
    case 8: out = spacing(settings); break;
    case 9: out = diam_constants(settings); break;
    case 10: out = premeasure_phase(settings); break;
    case 11: out = log_sum(settings); break;
    default: throw std::out_of_range("criterion id must be in 1..11");
  }
  out.id = id;
  out.name = presets()[static_cast<std::size_t>(id - 1)].first;
  return out;
}

}  // namespace psd::experiments
