#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiments.hpp"
#include "psd/covering.hpp"
#include "psd/diophantine.hpp"
#include "psd/envelope.hpp"
#include "psd/ps_seq.hpp"
#include "psd/rigor.hpp"

namespace psd::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  UsageError(const std::string& flag, const std::string& message) : std::runtime_error(flag + ": " + message) {}
};

// ---------------------------------------------------------------- output

class Emitter {
 public:
  Emitter(std::ostream& out, bool csv) : out_(out), csv_(csv) {}

  void config(const json& resolved) {
    json rec = {{"config", resolved}, {"record", "config"}, {"version", PSD_VERSION}};
    if (csv_) {
      out_ << "# " << rec.dump() << "\n";
    } else {
      out_ << rec.dump() << "\n";
    }
  }

  void record(const json& rec) {
    if (!csv_) {
      out_ << rec.dump() << "\n";
      return;
    }
    if (columns_.empty()) {
      for (const auto& [key, _] : rec.items()) columns_.push_back(key);
      for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << quote(columns_[i]);
      out_ << "\n";
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out_ << ",";
      auto it = rec.find(columns_[i]);
      if (it == rec.end() || it->is_null()) continue;
      out_ << quote(it->is_string() ? it->get<std::string>() : it->dump());
    }
    out_ << "\n";
  }

  /// A trailing summary: a record in JSON Lines, a comment line in CSV.
  void note(const json& rec) {
    if (csv_) {
      out_ << "# " << rec.dump() << "\n";
    } else {
      out_ << rec.dump() << "\n";
    }
  }

 private:
  static std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  std::ostream& out_;
  bool csv_;
  std::vector<std::string> columns_;
};

json enclosure(const BoundedReal& v) {
  return {{"bits", v.precision_bits()}, {"hi", v.hi().to_string(MPFR_RNDU)}, {"lo", v.lo().to_string(MPFR_RNDD)}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------- argument domains

Alpha parse_alpha(const std::string& text) {
  try {
    return Alpha::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("--alpha", std::string(e.what()) + " (expected a non-integral rational > 1, e.g. 3/2 or 3.1416)");
  }
}

std::vector<Rational> parse_rationals(const std::string& flag, const std::string& text, bool positive) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = parse_rational(item);
    if (!v || (positive && *v <= 0)) {
      throw UsageError(flag, "'" + item + "' is not a " + (positive ? "positive " : "") + "rational (p/q or decimal)");
    }
    out.push_back(*v);
  }
  if (out.empty()) throw UsageError(flag, "expected a comma-separated list of rationals");
  return out;
}

template <class T>
std::vector<T> parse_numbers(const std::string& flag, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_floating_point_v<T>) {
        out.push_back(static_cast<T>(std::stod(item, &used)));
      } else {
        out.push_back(static_cast<T>(std::stoull(item, &used)));
      }
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag, "'" + item + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError(flag, "expected a comma-separated list");
  return out;
}

LinearEquation parse_equation(const std::string& text) {
  try {
    return LinearEquation::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("--coeffs", std::string(e.what()) + " (expected positive rationals, e.g. 1,1 or 1/2,1/2)");
  }
}

// ---------------------------------------------------------------- config files

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config", "cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// -N is the only short flag; every other key is a long flag.
std::string flag_for(const std::string& key) { return key == "N" ? "-N" : "--" + key; }

bool given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Config entries are appended as explicit flags unless the command line
// already sets them; unknown keys then fail as unknown flags.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  const auto kv = read_config(*path);
  std::vector<std::string> extra;
  for (const auto& [key, value] : kv) {
    if (key == "config") throw UsageError("--config", "config files cannot nest");
    const std::string flag = flag_for(key);
    if (given(args, flag)) continue;
    if (flag.size() == 2) {
      extra.push_back(flag);
      extra.push_back(value);
    } else {
      extra.push_back(flag + "=" + value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

json resolved_options(const CLI::App& app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "version" || name == "config" || name == "jobs" || name.empty()) continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      cfg[name] = joined;
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

// ---------------------------------------------------------------- commands

struct Common {
  std::string format = "jsonl";
  int jobs = 1;
  std::uint64_t seed = 1;
};

struct CoverArgs {
  std::string coeffs;
  std::size_t k = 0;
  double beta = 4.0, s = 4.5, t = 5.0, gamma = 8.0;
  std::uint64_t min_r = 2, max_r = 100;
  std::optional<double> x_exponent;
  double sigma = 1.0;
  std::string sigma_grid, truncation_grid;
  bool include_empty = true;
  std::string alpha;
  std::uint64_t N = 200;
  double B = 2.0;

  CoveringParams params(bool validate = true) const {
    CoveringParams p;
    if (!coeffs.empty()) {
      p.b = parse_rationals("--coeffs", coeffs, true);
      if (k != 0 && k != p.b.size()) throw UsageError("--k", "must equal the number of --coeffs");
    } else {
      if (k == 0) throw UsageError("--coeffs", "give --coeffs or --k (weights default to 1)");
      p.b.assign(k, Rational(1));
    }
    p.beta = beta;
    p.s = s;
    p.t = t;
    p.gamma = gamma;
    p.M = min_r;
    p.R = max_r;
    p.x_exponent = x_exponent;
    p.sigma = sigma;
    if (validate) {
      try {
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError("--beta/--s/--t/--gamma/--min-r/--max-r", e.what());
      }
    }
    return p;
  }
};

void add_cover_options(CLI::App* sub, CoverArgs& a) {
  sub->add_option("--coeffs", a.coeffs, "weights b_1..b_k as rationals");
  sub->add_option("--k", a.k, "number of weights when --coeffs is omitted");
  sub->add_option("--beta", a.beta, "exponent of the window r^-beta");
  sub->add_option("--s", a.s, "left end of the alpha range");
  sub->add_option("--t", a.t, "right end of the alpha range");
  sub->add_option("--gamma", a.gamma, "upper cap for the critical point");
  sub->add_option("--min-r", a.min_r, "first radius M");
  sub->add_option("--max-r", a.max_r, "truncation radius R");
  sub->add_option("--x-exponent", a.x_exponent, "X(r) = r^x (default 2(1-beta)/3)");
}

json cover_record_json(const CoverRecord& rec, std::size_t k) {
  std::string nu;
  for (std::size_t j = 0; j < k; ++j) nu += ((rec.nu >> (k - 1 - j)) & 1u) ? '1' : '0';
  json comps = json::array();
  for (int i = 0; i < rec.cover.count; ++i) {
    comps.push_back({static_cast<double>(rec.cover.comp[i].lo()), static_cast<double>(rec.cover.comp[i].hi())});
  }
  json out = {{"r", rec.r},
              {"nu", nu},
              {"q", rec.q},
              {"tag", to_string(rec.tag)},
              {"empty", rec.empty()},
              {"diam", rec.diam()},
              {"components", comps}};
  out["lo"] = rec.empty() ? json(nullptr) : json(static_cast<double>(rec.cover.comp[0].lo()));
  out["hi"] = rec.empty() ? json(nullptr) : json(static_cast<double>(rec.cover.comp[rec.cover.count - 1].hi()));
  return out;
}

json warnings_json(const CoveringParams& p) { return p.warnings; }

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Piatetski-Shapiro sequences, floor-power equations and their covering intervals", "psd"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(PSD_VERSION));

  Common common;
  std::string config_path;
  app.add_option("--format", common.format, "output format")->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--jobs", common.jobs, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", common.seed, "seed for randomized sampling");
  app.add_option("--config", config_path, "flat key=value file; explicit flags win");

  std::function<void(Emitter&)> action;
  const CLI::App* leaf = nullptr;
  auto bind = [&](CLI::App* sub, std::function<void(Emitter&)> fn) {
    sub->callback([&, sub, fn] {
      leaf = sub;
      action = fn;
    });
  };

  // ps
  auto* ps = app.add_subcommand("ps", "Piatetski-Shapiro sequence terms")->require_subcommand(1);
  std::string alpha_text;
  std::uint64_t n_count = 0, n_first = 1;
  auto* ps_gen = ps->add_subcommand("gen", "emit (n, floor(n^alpha))");
  ps_gen->add_option("--alpha", alpha_text, "exponent")->required();
  ps_gen->add_option("--n", n_count, "last index")->required()->check(CLI::PositiveNumber);
  ps_gen->add_option("--first", n_first, "first index")->check(CLI::PositiveNumber);
  bind(ps_gen, [&](Emitter& em) {
    const Alpha alpha = parse_alpha(alpha_text);
    if (n_first > n_count) throw UsageError("--first", "must not exceed --n");
    GenerationOptions opts;
    opts.jobs = common.jobs;
    ps_stream(alpha, n_first, n_count, [&](const PSTerm& t) { em.record({{"n", t.n}, {"value", t.value.get_str()}}); },
              opts);
  });

  std::string member_text;
  auto* ps_member = ps->add_subcommand("member", "is m a term of PS(alpha)?");
  ps_member->add_option("--alpha", alpha_text, "exponent")->required();
  ps_member->add_option("--m", member_text, "candidate value")->required();
  bind(ps_member, [&](Emitter& em) {
    const Alpha alpha = parse_alpha(alpha_text);
    BigInt m;
    if (m.set_str(member_text, 10) != 0 || m < 1) throw UsageError("--m", "expected an integer >= 1");
    const auto n = is_member(m, alpha, PrecisionPolicy::from_environment());
    em.record({{"m", m.get_str()}, {"member", n.has_value()}, {"n", n ? json(n->get_str()) : json(nullptr)}});
  });

  // dio
  auto* dio = app.add_subcommand("dio", "floor-power linear equations")->require_subcommand(1);
  std::string coeffs_text;
  std::uint64_t N = 0;
  bool nontrivial_only = false;
  auto* dio_search = dio->add_subcommand("search", "all solutions with r <= N");
  dio_search->add_option("--alpha", alpha_text, "exponent")->required();
  dio_search->add_option("--coeffs", coeffs_text, "a_1..a_k as rationals")->required();
  dio_search->add_option("-N", N, "largest index of y")->required()->check(CLI::Range(2ull, 1ull << 40));
  dio_search->add_flag("--nontrivial-only", nontrivial_only, "omit trivial and degenerate solutions");
  bind(dio_search, [&](Emitter& em) {
    const Alpha alpha = parse_alpha(alpha_text);
    const auto eq = parse_equation(coeffs_text);
    SearchOptions opts;
    opts.jobs = common.jobs;
    std::map<std::string, std::uint64_t> counts{{"trivial", 0}, {"degenerate", 0}, {"nontrivial", 0}};
    for (const auto& s : search_solutions(eq, alpha, N, opts)) {
      ++counts[to_string(s.classification)];
      if (nontrivial_only && s.classification != Classification::NonTrivial) continue;
      json xs = json::array();
      for (const auto& x : s.x_values) xs.push_back(x.get_str());
      em.record({{"r", s.r}, {"q", s.q}, {"y", s.y_value.get_str()}, {"x", xs},
                 {"classification", to_string(s.classification)}});
    }
    em.note({{"record", "summary"}, {"counts", counts}});
  });

  std::uint64_t x_value = 0;
  std::string mode_text = "largest", x_list = "100,200,400,800";
  int n_bound_exponent = 0;
  auto parse_mode = [&] {
    return mode_text == "smallest" ? CountMode::SmallestLessThanX : CountMode::LargestLessThanX;
  };
  auto* dio_count = dio->add_subcommand("count", "count floor(l^a)+floor(m^a)=floor(n^a)");
  dio_count->add_option("--alpha", alpha_text, "exponent")->required();
  dio_count->add_option("--x", x_value, "bound x")->required()->check(CLI::Range(2ull, 1ull << 32));
  dio_count->add_option("--mode", mode_text, "smallest: min(l,m) < x; largest: n < x")
      ->check(CLI::IsMember({"smallest", "largest"}));
  dio_count->add_option("--n-bound-exponent", n_bound_exponent, "smallest mode: n < x^e (0 = ceil(beta)+1)");
  bind(dio_count, [&](Emitter& em) {
    const Alpha alpha = parse_alpha(alpha_text);
    CountOptions opts;
    opts.jobs = common.jobs;
    opts.n_bound_exponent = n_bound_exponent;
    em.record({{"x", x_value}, {"mode", mode_text}, {"count", count_fermat(alpha, x_value, parse_mode(), opts)}});
  });

  auto* dio_fit = dio->add_subcommand("fit", "log-log growth fit of count_fermat");
  dio_fit->add_option("--alpha", alpha_text, "exponent")->required();
  dio_fit->add_option("--x-list", x_list, "comma-separated x values");
  dio_fit->add_option("--mode", mode_text, "smallest or largest")->check(CLI::IsMember({"smallest", "largest"}));
  bind(dio_fit, [&](Emitter& em) {
    const Alpha alpha = parse_alpha(alpha_text);
    CountOptions opts;
    opts.jobs = common.jobs;
    std::vector<std::pair<double, double>> pts;
    for (auto x : parse_numbers<std::uint64_t>("--x-list", x_list)) {
      if (x < 2) throw UsageError("--x-list", "values must be >= 2");
      const auto c = count_fermat(alpha, x, parse_mode(), opts);
      pts.emplace_back(static_cast<double>(x), static_cast<double>(c));
      em.record({{"x", x}, {"count", c}});
    }
    const auto fit = fit_growth_exponent(pts);
    json summary = {{"record", "fit"}, {"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual}};
    if (alpha.to_double() < 2.0) {
      const auto model = growth_model(alpha);
      summary["predicted_exponent"] = model.predicted_exponent;
      summary["zeta_beta"] = model.zeta_beta;
      summary["leading_constant"] = model.leading_constant;
    }
    em.note(summary);
  });

  // env
  auto* env_cmd = app.add_subcommand("env", "the envelope E(u) = sum b_i Q_i^u")->require_subcommand(1);
  std::string b_text, q_text, Q_text;
  std::uint64_t r_value = 0;
  double beta = 4.0, s = 4.5, t = 5.0, gamma = 8.0, tol = 1e-13;
  auto* env_solve = env_cmd->add_subcommand("solve", "the covering interval J(q; r)");
  env_solve->add_option("--b", b_text, "weights")->required();
  env_solve->add_option("--q", q_text, "indices q_1..q_k")->required();
  env_solve->add_option("--r", r_value, "radius r")->required()->check(CLI::Range(2ull, 1ull << 62));
  env_solve->add_option("--beta", beta, "window exponent");
  env_solve->add_option("--s", s, "left end");
  env_solve->add_option("--t", t, "right end");
  env_solve->add_option("--gamma", gamma, "critical-point cap used by the case tag");
  bind(env_solve, [&](Emitter& em) {
    const auto b = parse_rationals("--b", b_text, true);
    const auto q = parse_numbers<std::uint64_t>("--q", q_text);
    if (q.size() != b.size()) throw UsageError("--q", "needs as many entries as --b");
    if (std::any_of(q.begin(), q.end(), [](auto v) { return v == 0; })) throw UsageError("--q", "indices must be >= 1");
    if (!(beta > 1.0 && s < t)) throw UsageError("--beta/--s/--t", "need beta > 1 and s < t");
    const auto env = Envelope::from_indices(b, q, r_value);
    const auto J = cover_interval(env, r_value, beta, s, t);
    json comps = json::array();
    for (std::size_t i = 0; i < J.components.size(); ++i) {
      comps.push_back({{"lo", enclosure(J.components[i].lo)}, {"hi", enclosure(J.components[i].hi)},
                       {"diam", J.component_diams[i]}});
    }
    json tag = nullptr;
    if (1.0 < beta && beta < s && t < gamma && std::none_of(q.begin(), q.end(), [&](auto v) { return v == r_value; })) {
      CoveringParams p;
      p.b = b;
      p.beta = beta;
      p.s = s;
      p.t = t;
      p.gamma = gamma;
      tag = to_string(classify_case(q, r_value, p));
    }
    em.record({{"r", r_value},
               {"q", q},
               {"empty", J.empty},
               {"diam", J.diam},
               {"case_tag", tag},
               {"lo", J.empty ? json(nullptr) : enclosure(J.lo())},
               {"hi", J.empty ? json(nullptr) : enclosure(J.hi())},
               {"components", comps}});
  });

  auto* env_critical = env_cmd->add_subcommand("critical", "critical point u0 and minimum m");
  env_critical->add_option("--b", b_text, "weights")->required();
  env_critical->add_option("--Q", Q_text, "ratios Q_1..Q_k")->required();
  env_critical->add_option("--tol", tol, "bracket width for u0")->check(CLI::PositiveNumber);
  env_critical->add_option("--gamma", gamma, "initial bracket is [-2, 2 gamma]");
  bind(env_critical, [&](Emitter& em) {
    Envelope env;
    env.b = parse_rationals("--b", b_text, true);
    env.Q = parse_rationals("--Q", Q_text, true);
    if (env.b.size() != env.Q.size()) throw UsageError("--Q", "needs as many entries as --b");
    const auto crit = critical_point(env, tol, gamma);
    json Qs = json::array();
    for (const auto& v : env.Q) Qs.push_back(psd::to_string(v));
    if (!crit) {
      em.record({{"Q", Qs}, {"exists", false}, {"u0", nullptr}, {"m", nullptr}});
      return;
    }
    em.record({{"Q", Qs}, {"exists", true}, {"u0", enclosure(crit->u0)}, {"m", enclosure(crit->m)}});
  });

  // cover
  auto* cover = app.add_subcommand("cover", "covering families J(q; r)")->require_subcommand(1);
  CoverArgs ca;
  auto* cover_build = cover->add_subcommand("build", "enumerate J(q; r) for r in [M, R]");
  add_cover_options(cover_build, ca);
  cover_build->add_option("--include-empty", ca.include_empty, "also emit empty sets");
  bind(cover_build, [&](Emitter& em) {
    const auto p = ca.params();
    EnumerateOptions opts;
    opts.include_empty = ca.include_empty;
    opts.jobs = common.jobs;
    std::map<std::string, std::uint64_t> counts;
    for_each_cover(p, opts, [&](const CoverRecord& rec) {
      ++counts[to_string(rec.tag)];
      em.record(cover_record_json(rec, p.k()));
    });
    em.note({{"record", "summary"}, {"counts", counts}, {"M", p.M}, {"warnings", warnings_json(p)}});
  });

  auto* cover_sum = cover->add_subcommand("sum", "premeasure partial sums of (diam J)^sigma");
  add_cover_options(cover_sum, ca);
  cover_sum->add_option("--sigma", ca.sigma, "exponent sigma in (0, 1]")->check(CLI::Range(0.0, 1.0));
  bind(cover_sum, [&](Emitter& em) {
    const auto p = ca.params();
    if (!(ca.sigma > 0.0)) throw UsageError("--sigma", "must lie in (0, 1]");
    EnumerateOptions opts;
    opts.include_empty = false;
    opts.jobs = common.jobs;
    PremeasureAccumulator acc({ca.sigma}, p.M, p.R);
    for_each_cover(p, opts, [&](const CoverRecord& rec) { acc.add(rec); });
    acc.finish();
    const auto rep = acc.reports().front();
    for (std::size_t i = 0; i < rep.per_r_sums.size(); ++i) {
      em.record({{"r", rep.per_r_sums[i].first}, {"sum", rep.per_r_sums[i].second},
                 {"tail", rep.tail_estimates[i].second}});
    }
    em.note({{"record", "summary"}, {"sigma", rep.sigma}, {"cumulative", rep.cumulative}, {"M", p.M},
             {"top_decade_slope", finite_or_null(top_decade_slope(rep.per_r_sums))}, {"warnings", warnings_json(p)}});
  });

  auto* cover_dim = cover->add_subcommand("dim", "premeasure matrix over sigma and truncation R");
  add_cover_options(cover_dim, ca);
  cover_dim->add_option("--sigma-grid", ca.sigma_grid, "comma-separated sigma values (default: 21 around the threshold)");
  cover_dim->add_option("--truncation-grid", ca.truncation_grid, "comma-separated R values (default: R/4, R/2, R)");
  bind(cover_dim, [&](Emitter& em) {
    auto p = ca.params();
    const auto sigmas = ca.sigma_grid.empty() ? default_sigma_grid(p) : parse_numbers<double>("--sigma-grid", ca.sigma_grid);
    for (double v : sigmas) {
      if (!(v > 0.0 && v <= 1.0)) throw UsageError("--sigma-grid", "values must lie in (0, 1]");
    }
    std::vector<std::uint64_t> Rs;
    if (ca.truncation_grid.empty()) {
      Rs = {std::max(p.M, p.R / 4), std::max(p.M, p.R / 2), p.R};
      Rs.erase(std::unique(Rs.begin(), Rs.end()), Rs.end());
    } else {
      Rs = parse_numbers<std::uint64_t>("--truncation-grid", ca.truncation_grid);
      for (auto R : Rs) {
        if (R < p.M) throw UsageError("--truncation-grid", "values must be >= the first radius M");
      }
    }
    EnumerateOptions opts;
    opts.jobs = common.jobs;
    const auto diag = dimension_diagnostic(p, sigmas, Rs, opts);
    const std::size_t width = std::to_string(diag.truncation_grid.back()).size();
    for (std::size_t i = 0; i < diag.sigma_grid.size(); ++i) {
      json row = {{"sigma", diag.sigma_grid[i]},
                  {"slope", finite_or_null(diag.slopes[i])},
                  {"slope_log_sigma", finite_or_null(diag.slopes_log_sigma[i])},
                  {"slope_log_sigma1", finite_or_null(diag.slopes_log_sigma1[i])},
                  {"verdict", diag.convergent_like[i] ? "convergent-like" : "divergent-like"}};
      for (std::size_t j = 0; j < diag.truncation_grid.size(); ++j) {
        std::string key = std::to_string(diag.truncation_grid[j]);
        key = "R=" + std::string(width - key.size(), '0') + key;
        row[key] = diag.sums[i][j];
      }
      em.record(row);
    }
    em.note({{"record", "summary"}, {"threshold_reference", diag.threshold_reference}, {"M", p.M},
             {"warnings", warnings_json(p)}});
  });

  auto* cover_verify = cover->add_subcommand("verify", "check that search solutions lie in their J(q; r)");
  add_cover_options(cover_verify, ca);
  cover_verify->add_option("--alpha", ca.alpha, "exponent (must lie in [s, t])")->required();
  cover_verify->add_option("-N", ca.N, "search bound for r")->check(CLI::Range(2ull, 1ull << 40));
  bind(cover_verify, [&](Emitter& em) {
    const Alpha alpha = parse_alpha(ca.alpha);
    if (ca.coeffs.empty()) throw UsageError("--coeffs", "required for verify");
    const auto eq = parse_equation(ca.coeffs);
    CoverArgs relaxed = ca;
    relaxed.max_r = std::max(ca.max_r, std::max(ca.min_r, ca.N));
    const auto p = relaxed.params();
    if (alpha.to_double() < p.s || alpha.to_double() > p.t) throw UsageError("--alpha", "must lie in [s, t]");
    SearchOptions opts;
    opts.jobs = common.jobs;
    std::map<std::string, std::uint64_t> counts;
    for (const auto& sol : search_solutions(eq, alpha, ca.N, opts)) {
      if (sol.classification == Classification::Trivial) continue;
      const auto res = verify_inclusion(sol, eq, alpha, p);
      ++counts[to_string(res.kind)];
      em.record({{"r", sol.r},
                 {"q", sol.q},
                 {"classification", to_string(sol.classification)},
                 {"result", to_string(res.kind)},
                 {"tag", res.tag ? json(to_string(*res.tag)) : json(nullptr)},
                 {"deviation", res.deviation},
                 {"window", res.window},
                 {"reduced", res.reduced}});
    }
    em.note({{"record", "summary"}, {"counts", counts}, {"M", p.M}, {"warnings", warnings_json(p)}});
  });

  auto* cover_bounds = cover->add_subcommand("bounds", "empirical constants diam / bound per case");
  add_cover_options(cover_bounds, ca);
  bind(cover_bounds, [&](Emitter& em) {
    const auto p = ca.params();
    EnumerateOptions opts;
    opts.jobs = common.jobs;
    opts.include_empty = true;
    DiamBoundAccumulator acc(p);
    for_each_cover(p, opts, [&](const CoverRecord& rec) { acc.add(rec); });
    for (const auto& [tag, c] : acc.report()) {
      em.record({{"tag", to_string(tag)},
                 {"count", c.count},
                 {"nonempty", c.nonempty},
                 {"max_ratio", c.max_ratio},
                 {"max_diam", c.max_diam},
                 {"witness_r", c.witness_r},
                 {"witness_q", c.witness_q}});
    }
    em.note({{"record", "summary"}, {"M", p.M}, {"warnings", warnings_json(p)}});
  });

  auto* cover_logsum = cover->add_subcommand("logsum", "sums of |log(q/r)|^-sigma against r + r log r + r^sigma");
  cover_logsum->add_option("--sigma", ca.sigma, "exponent sigma > 0")->check(CLI::PositiveNumber);
  cover_logsum->add_option("--B", ca.B, "upper range factor B > 1");
  cover_logsum->add_option("--min-r", ca.min_r, "first r")->check(CLI::Range(2ull, 1ull << 32));
  cover_logsum->add_option("--max-r", ca.max_r, "last r")->check(CLI::Range(2ull, 1ull << 32));
  bind(cover_logsum, [&](Emitter& em) {
    if (!(ca.B > 1.0)) throw UsageError("--B", "must exceed 1");
    if (ca.min_r > ca.max_r) throw UsageError("--min-r", "must not exceed --max-r");
    for (std::uint64_t r = ca.min_r; r <= ca.max_r; ++r) {
      const auto ls = log_sum_check(r, ca.sigma, ca.B);
      em.record({{"r", r}, {"below", ls.below}, {"above", ls.above}, {"rhs", ls.rhs},
                 {"ratio", std::max(ls.below, ls.above) / ls.rhs}});
    }
  });

  // preset
  std::string preset_name;
  std::vector<std::string> preset_names;
  for (const auto& [name, _] : experiments::presets()) preset_names.push_back(name);
  auto* preset = app.add_subcommand("preset", "run a named experiment");
  preset->add_option("name", preset_name, "experiment name")->required()->check(CLI::IsMember(preset_names));
  bind(preset, [&](Emitter& em) {
    experiments::Settings settings;
    settings.jobs = common.jobs;
    settings.seed = common.seed;
    const auto res = experiments::run(experiments::preset_id(preset_name), settings);
    em.record({{"criterion", res.id},
               {"name", res.name},
               {"pass", res.pass},
               {"summary", res.summary},
               {"time_limit", res.time_limit},
               {"data", res.data}});
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << PSD_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (!action || !leaf) {
    err << "error: no command given\n";
    return kUsage;
  }

  try {
    Emitter em(out, common.format == "csv");
    json cfg = resolved_options(app);
    std::string command;
    for (const CLI::App* a = leaf; a && a != &app; a = a->get_parent()) {
      command = a->get_name() + (command.empty() ? "" : " " + command);
      const json opts = resolved_options(*a);
      for (const auto& [key, value] : opts.items()) cfg[key] = value;
    }
    cfg["command"] = command;
    em.config(cfg);
    action(em);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionExhausted& e) {
    err << "error: precision exhausted: " << e.what() << "\n";
    return kPrecision;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  out.flush();
  return kOk;
}

}  // namespace psd::cli
