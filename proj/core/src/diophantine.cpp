#include "psd/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "psd/parallel.hpp"

namespace psd {

// ---------------------------------------------------------------- equation

LinearEquation::LinearEquation(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("equation needs at least one coefficient");
  for (auto& a : coeffs_) {
    a.canonicalize();
    if (a <= 0) throw std::invalid_argument("coefficients must be positive, got " + psd::to_string(a));
  }
}

LinearEquation LinearEquation::parse(std::string_view text) {
  std::vector<Rational> coeffs;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    auto piece = text.substr(start, comma - start);
    auto v = parse_rational(piece);
    if (!v) throw CoefficientNotRational("coefficient '" + std::string(piece) + "' is not an exact rational");
    coeffs.push_back(*v);
    start = comma + 1;
  }
  return LinearEquation(std::move(coeffs));
}

Rational LinearEquation::sum() const {
  Rational s = 0;
  for (const auto& a : coeffs_) s += a;
  return s;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Trivial: return "trivial";
    case Classification::Degenerate: return "degenerate";
    case Classification::NonTrivial: return "nontrivial";
  }
  return "?";
}

Classification classify_solution(const LinearEquation& eq, const SolutionTuple& tuple) {
  if (tuple.x_values.size() != eq.k()) throw EquationViolated("tuple arity does not match the equation");
  Rational rhs = 0;
  for (std::size_t i = 0; i < eq.k(); ++i) rhs += eq.coeffs()[i] * Rational(tuple.x_values[i]);
  if (rhs != Rational(tuple.y_value)) throw EquationViolated("tuple does not satisfy the equation");

  const bool all_equal = std::all_of(tuple.x_values.begin(), tuple.x_values.end(),
                                     [&](const BigInt& x) { return x == tuple.y_value; });
  if (all_equal && eq.sum() == 1) return Classification::Trivial;

  std::set<BigInt> distinct(tuple.x_values.begin(), tuple.x_values.end());
  distinct.insert(tuple.y_value);
  return distinct.size() < eq.k() + 1 ? Classification::Degenerate : Classification::NonTrivial;
}

LinearEquation reduce_equation(const LinearEquation& eq, const Collision& collision) {
  const auto& a = eq.coeffs();
  std::vector<Rational> out;
  if (const auto* c = std::get_if<YEqualsX>(&collision)) {
    if (c->i >= a.size()) throw InvalidCollision("YEqualsX index out of range");
    if (a[c->i] >= 1) throw InvalidCollision("y = x_i forces a_i < 1, got a_i = " + psd::to_string(a[c->i]));
    if (a.size() == 1) throw InvalidCollision("reducing y = x_1 leaves no variables");
    const Rational denom = 1 - a[c->i];
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j != c->i) out.push_back(a[j] / denom);
    }
  } else {
    const auto& x = std::get<XEqualsX>(collision);
    if (x.i == x.j || x.i >= a.size() || x.j >= a.size()) throw InvalidCollision("bad XEqualsX indices");
    const std::size_t keep = std::min(x.i, x.j), drop = std::max(x.i, x.j);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j == keep) {
        out.push_back(a[x.i] + a[x.j]);
      } else if (j != drop) {
        out.push_back(a[j]);
      }
    }
  }
  return LinearEquation(std::move(out));
}

std::vector<Collision> collisions_of(const SolutionTuple& tuple) {
  std::vector<Collision> out;
  for (std::size_t i = 0; i < tuple.x_values.size(); ++i) {
    if (tuple.x_values[i] == tuple.y_value) out.emplace_back(YEqualsX{i});
  }
  for (std::size_t i = 0; i < tuple.x_values.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.x_values.size(); ++j) {
      if (tuple.x_values[i] == tuple.x_values[j]) out.emplace_back(XEqualsX{i, j});
    }
  }
  return out;
}

SolutionTuple reduce_solution(const SolutionTuple& tuple, const Collision& collision) {
  SolutionTuple out;
  out.r = tuple.r;
  out.y_value = tuple.y_value;
  std::size_t drop = 0;
  if (const auto* c = std::get_if<YEqualsX>(&collision)) {
    drop = c->i;
  } else {
    const auto& x = std::get<XEqualsX>(collision);
    drop = std::max(x.i, x.j);
  }
  for (std::size_t i = 0; i < tuple.q.size(); ++i) {
    if (i != drop) {
      out.q.push_back(tuple.q[i]);
      out.x_values.push_back(tuple.x_values[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- search

namespace {

// The equation scaled to integers: D y = sum c_i x_i.
struct IntegerForm {
  BigInt D;
  std::vector<BigInt> c;
  std::vector<BigInt> tail;  // tail[j] = sum_{i > j} c_i
  BigInt c_min;
};

IntegerForm integer_form(const LinearEquation& eq) {
  IntegerForm f;
  f.D = 1;
  for (const auto& a : eq.coeffs()) mpz_lcm(f.D.get_mpz_t(), f.D.get_mpz_t(), a.get_den().get_mpz_t());
  for (const auto& a : eq.coeffs()) f.c.push_back(a.get_num() * (f.D / a.get_den()));
  const std::size_t k = f.c.size();
  f.tail.assign(k, 0);
  for (std::size_t j = k - 1; j-- > 0;) f.tail[j] = f.tail[j + 1] + f.c[j + 1];
  f.c_min = *std::min_element(f.c.begin(), f.c.end());
  return f;
}

// Depth-first enumeration of q_1..q_{k-1}; q_k comes from the table.
class RowSearcher {
 public:
  RowSearcher(const LinearEquation& eq, const IntegerForm& form, const PsTable& table)
      : eq_(eq), form_(form), table_(table), k_(form.c.size()), rem_(k_ + 1), q_(k_), hint_(k_, 1) {}

  void run(std::uint64_t r, std::vector<SolutionTuple>& out) {
    r_ = r;
    out_ = &out;
    rem_[0] = form_.D * table_[r];
    descend(0);
  }

 private:
  void descend(std::size_t j) {
    if (j + 1 == k_) {
      solve_last();
      return;
    }
    for (std::uint64_t q = 1; q <= table_.size(); ++q) {
      // rem_[j+1] = rem_[j] - c_j x_q must still leave room for the tail.
      mpz_mul(scratch_.get_mpz_t(), form_.c[j].get_mpz_t(), table_[q].get_mpz_t());
      mpz_sub(rem_[j + 1].get_mpz_t(), rem_[j].get_mpz_t(), scratch_.get_mpz_t());
      if (rem_[j + 1] < form_.tail[j]) break;
      q_[j] = q;
      descend(j + 1);
    }
  }

  void solve_last() {
    const BigInt& rem = rem_[k_ - 1];
    const BigInt& c = form_.c[k_ - 1];
    if (rem < c) return;
    if (c != 1) {
      if (!mpz_divisible_p(rem.get_mpz_t(), c.get_mpz_t())) return;
      mpz_divexact(scratch_.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t());
    } else {
      scratch_ = rem;
    }
    std::uint64_t n = table_.index_of(scratch_, hint_[k_ - 1]);
    if (n == 0) return;
    q_[k_ - 1] = n;
    SolutionTuple s;
    s.r = r_;
    s.q = q_;
    s.y_value = table_[r_];
    for (auto qi : q_) s.x_values.push_back(table_[qi]);
    s.classification = classify_solution(eq_, s);
    out_->push_back(std::move(s));
  }

  const LinearEquation& eq_;
  const IntegerForm& form_;
  const PsTable& table_;
  std::size_t k_;
  std::vector<BigInt> rem_;
  std::vector<std::uint64_t> q_;
  std::vector<std::uint64_t> hint_;
  BigInt scratch_;
  std::uint64_t r_ = 0;
  std::vector<SolutionTuple>* out_ = nullptr;
};

// Table large enough that every admissible x value is present: extend past
// max(D floor(N^a)) / c_min.
PsTable table_for(const IntegerForm& form, const Alpha& alpha, std::uint64_t N, int jobs) {
  PsTable table(alpha, N, jobs);
  BigInt vmax = form.D * table[N] / form.c_min;
  const double scale = std::pow(form.D.get_d() / form.c_min.get_d(), 1.0 / alpha.to_double());
  const auto cap = static_cast<std::uint64_t>(scale * static_cast<double>(N)) * 2 + 16;
  table.extend_past(vmax, cap);
  return table;
}

std::vector<SolutionTuple> search_with_table(const LinearEquation& eq, const IntegerForm& form,
                                             const PsTable& table, std::uint64_t N, const SearchOptions& options) {
  const std::uint64_t block = std::max<std::uint64_t>(options.block, 1);
  const std::size_t blocks = static_cast<std::size_t>((N + block - 1) / block);
  auto parts = ordered_block_map<std::vector<SolutionTuple>>(blocks, options.jobs, [&](std::size_t b) {
    std::vector<SolutionTuple> out;
    RowSearcher searcher(eq, form, table);
    const std::uint64_t first = 1 + b * block;
    const std::uint64_t last = std::min(N, first + block - 1);
    for (std::uint64_t r = first; r <= last; ++r) searcher.run(r, out);
    return out;
  });
  std::vector<SolutionTuple> all;
  for (auto& p : parts) {
    for (auto& s : p) all.push_back(std::move(s));
  }
  // Rows are disjoint and each row is generated in q-lexicographic order.
  return all;
}

}  // namespace

std::uint64_t index_bound(const LinearEquation& eq, std::size_t j, const BigInt& y_value, const PsTable& table) {
  const auto form = integer_form(eq);
  BigInt others = 0;
  for (std::size_t i = 0; i < form.c.size(); ++i) {
    if (i != j) others += form.c[i];
  }
  BigInt room = form.D * y_value - others;
  if (room < form.c[j]) return 0;
  return table.count_at_most(room / form.c[j]);
}

std::vector<SolutionTuple> search_solutions(const LinearEquation& eq, const Alpha& alpha, std::uint64_t N,
                                            const SearchOptions& options) {
  if (N < 1) throw std::invalid_argument("search_solutions: N must be >= 1");
  const auto form = integer_form(eq);
  const PsTable table = table_for(form, alpha, N, options.jobs);
  return search_with_table(eq, form, table, N, options);
}

// ---------------------------------------------------------------- counting

namespace {

std::uint64_t count_largest(const Alpha& alpha, std::uint64_t x, const CountOptions& options) {
  if (x < 2) return 0;
  LinearEquation eq({Rational(1), Rational(1)});
  SearchOptions so;
  so.jobs = options.jobs;
  return search_solutions(eq, alpha, x - 1, so).size();
}

std::uint64_t count_smallest(const Alpha& alpha, std::uint64_t x, const CountOptions& options) {
  if (x < 2) return 0;
  const double a = alpha.to_double();
  const double beta = 1.0 / (a - 1.0);
  const int e = options.n_bound_exponent > 0 ? options.n_bound_exponent : static_cast<int>(std::ceil(beta)) + 1;
  const double n_cap_d = std::pow(static_cast<double>(x), e);
  const std::uint64_t n_cap =
      n_cap_d >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(n_cap_d);

  // For m with a m^(a-1) - 1 > floor(l^a) every gap after floor(m^a) exceeds
  // floor(l^a), so no n > m can close the equation.
  auto m_stop_for = [&](const BigInt& xl) {
    double bound = std::pow((xl.get_d() + 1.0) / a, 1.0 / (a - 1.0));
    return static_cast<std::uint64_t>(bound) + 2;
  };
  const BigInt x_last = floor_pow(BigInt(x - 1), alpha);
  const std::uint64_t m_max = std::min<std::uint64_t>(m_stop_for(x_last), n_cap);
  PsTable table(alpha, std::max<std::uint64_t>(x, m_max + 1), options.jobs);
  table.extend_past(table[x - 1] + table[m_max], std::numeric_limits<std::uint64_t>::max());
  auto m_stop = [&](std::uint64_t l) { return m_stop_for(table[l]); };

  struct Partial {
    std::uint64_t any_m = 0;
    std::uint64_t small_m = 0;
  };
  const std::uint64_t L = x - 1;
  auto parts = ordered_block_map<Partial>(static_cast<std::size_t>(L), options.jobs, [&](std::size_t i) {
    const std::uint64_t l = i + 1;
    Partial p;
    const std::uint64_t stop = std::min<std::uint64_t>(m_stop(l), m_max);
    std::uint64_t hint = 1;
    BigInt v;
    for (std::uint64_t m = 1; m <= stop; ++m) {
      mpz_add(v.get_mpz_t(), table[l].get_mpz_t(), table[m].get_mpz_t());
      std::uint64_t n = table.index_of(v, hint);
      if (n != 0 && n < n_cap) {
        ++p.any_m;
        if (m < x) ++p.small_m;
      }
    }
    return p;
  });
  std::uint64_t any = 0, small = 0;
  for (const auto& p : parts) {
    any += p.any_m;
    small += p.small_m;
  }
  return 2 * any - small;
}

}  // namespace

std::uint64_t count_fermat(const Alpha& alpha, std::uint64_t x, CountMode mode, const CountOptions& options) {
  return mode == CountMode::LargestLessThanX ? count_largest(alpha, x, options) : count_smallest(alpha, x, options);
}

double zeta(double s, double* error) {
  if (!(s > 1.0)) throw std::domain_error("zeta: s must be > 1");
  constexpr int N = 100;
  double sum = 0.0;
  for (int n = N - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  const double Nd = N;
  sum += std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
  // Bernoulli corrections B_2j/(2j)! * s(s+1)...(s+2j-2) N^(-s-2j+1).
  const double bern[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
  double rising = s;  // s(s+1)...(s+2j-2)
  double fact = 2.0;  // (2j)!
  for (int j = 1; j <= 3; ++j) {
    sum += bern[j - 1] / fact * rising * std::pow(Nd, -s - 2.0 * j + 1.0);
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  if (error) {
    // The remainder is bounded by the first omitted term (j = 4).
    *error = std::abs(bern[3] / fact * rising * std::pow(Nd, -s - 7.0)) + 1e-15 * sum;
  }
  return sum;
}

GrowthModel growth_model(const Alpha& alpha) {
  const double a = alpha.to_double();
  if (!(a > 1.0 && a < 2.0)) throw std::domain_error("growth_model: requires 1 < alpha < 2");
  GrowthModel g;
  g.beta = 1.0 / (a - 1.0);
  g.zeta_beta = zeta(g.beta, &g.zeta_error);
  g.predicted_exponent = a * (g.beta - 1.0) + 1.0;
  g.leading_constant = g.beta * std::pow(a, -g.beta) * g.zeta_beta;
  return g;
}

LineFit fit_growth_exponent(const std::vector<std::pair<double, double>>& counts) { return log_log_fit(counts, 3); }

}  // namespace psd
