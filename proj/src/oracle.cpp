#include "kloost/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <thread>

namespace kloost {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

using Row = std::vector<mpq_class>;

bool integral(const Row& r, long p) {
  return std::all_of(r.begin(), r.end(), [p](const mpq_class& x) { return is_p_integral(x, p); });
}

bool divisible(const mpq_class& x, long p, int level) { return x == 0 || valuation(x, p) >= level; }

// First column subset whose minor in `rows` is a p-adic unit, with the inverse of that minor.
struct UnitMinor {
  std::vector<int> cols;
  RationalMatrix inverse;
};

bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[idx(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++c[idx(i)];
  for (int j = i + 1; j < k; ++j) c[idx(j)] = c[idx(j - 1)] + 1;
  return true;
}

std::optional<UnitMinor> unit_minor(const std::vector<Row>& rows, long p) {
  const int k = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.front().size());
  std::vector<int> cols(idx(k));
  std::iota(cols.begin(), cols.end(), 0);
  do {
    RationalMatrix sub(idx(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) sub(idx(a), idx(b)) = rows[idx(a)][idx(cols[idx(b)])];
    mpq_class det = sub.determinant();
    if (det != 0 && valuation(det, p) == 0) return UnitMinor{cols, sub.inverse()};
  } while (next_combination(cols, n));
  return std::nullopt;
}

struct Search {
  const RationalMatrix& n;
  long p;
  int B;
  int level;
  u64 budget;
  std::atomic<u64>& visited;

  Search(const RationalMatrix& n_, long p_, int B_, int level_, u64 budget_, std::atomic<u64>& visited_)
      : n(n_), p(p_), B(B_), level(level_), budget(budget_), visited(visited_) {}

  int s = 0;
  std::vector<int> pi;                 // column of the nonzero entry in each row of n
  std::vector<std::vector<int>> vars;  // support columns of each u' row
  u64 base = 1;                        // p^B
  mpq_class step;                      // 1 / p^B

  void init() {
    s = static_cast<int>(n.size());
    pi.assign(idx(s), -1);
    for (int x = 0; x < s; ++x)
      for (int c = 0; c < s; ++c)
        if (n(idx(x), idx(c)) != 0) pi[idx(x)] = c;
    if (!n.is_monomial()) throw std::invalid_argument("oracle needs a monomial matrix");
    std::vector<int> row_of(idx(s));
    for (int x = 0; x < s; ++x) row_of[idx(pi[idx(x)])] = x;
    vars.assign(idx(s), {});
    for (int a = 0; a < s; ++a)
      for (int b = a + 1; b < s; ++b)
        if (row_of[idx(a)] > row_of[idx(b)]) vars[idx(a)].push_back(b);
    base = ipow(static_cast<u64>(p), static_cast<unsigned>(B));
    step = mpq_class(mpz_class(1), mpz_class(static_cast<unsigned long>(base)));
  }

  u64 candidates(int depth) const {
    const int x = s - 1 - depth;
    const std::size_t nv = vars[idx(pi[idx(x)])].size();
    try {
      return ipow(base, static_cast<unsigned>(nv));
    } catch (const ArithmeticError&) {
      throw BudgetExceeded("oracle candidate space too large");
    }
  }

  struct State {
    std::vector<Row> rows;  // cleared rows, bottom first
    std::vector<Row> coef;  // each cleared row as a combination of rows of n u'
    std::vector<int> which; // row index of n for each cleared row
    std::optional<UnitMinor> minor;
    RationalMatrix u_prime;
  };

  void run(int depth, State& st, u64 lo, u64 hi, std::vector<CosetPair>& out) {
    const int x = s - 1 - depth;
    const int rho = pi[idx(x)];
    const auto& cols = vars[idx(rho)];
    const mpq_class sx = n(idx(x), idx(rho));
    for (u64 t = lo; t < hi; ++t) {
      if (visited.fetch_add(1, std::memory_order_relaxed) >= budget)
        throw BudgetExceeded("oracle search exceeds budget " + std::to_string(budget));
      Row X(idx(s), 0);
      X[idx(rho)] = sx;
      u64 rest = t;
      for (int b : cols) {
        const mpq_class a = mpq_class(mpz_class(static_cast<unsigned long>(rest % base))) * step;
        rest /= base;
        st.u_prime(idx(rho), idx(b)) = a;
        X[idx(b)] = sx * a;
      }
      Row coef(idx(s), 0);
      coef[idx(x)] = 1;
      if (depth > 0) {
        const UnitMinor& um = *st.minor;
        const std::size_t k = st.rows.size();
        for (std::size_t b = 0; b < k; ++b) {
          mpq_class v = 0;
          for (std::size_t a = 0; a < k; ++a) v += X[idx(um.cols[a])] * um.inverse(a, b);
          if (v == 0) continue;
          for (int c = 0; c < s; ++c) {
            X[idx(c)] -= v * st.rows[b][idx(c)];
            coef[idx(c)] -= v * st.coef[b][idx(c)];
          }
        }
      }
      if (!integral(X, p)) continue;
      if (depth == 0 && level > 0) {
        bool ok = true;
        for (int c = 0; c + 1 < s && ok; ++c) ok = divisible(X[idx(c)], p, level);
        if (!ok) continue;
      }
      State next{st.rows, st.coef, st.which, std::nullopt, st.u_prime};
      next.rows.push_back(X);
      next.coef.push_back(coef);
      next.which.push_back(x);
      if (depth + 1 == s) {
        CosetPair cp{RationalMatrix(idx(s)), next.u_prime};
        for (std::size_t r = 0; r < next.rows.size(); ++r)
          for (int c = 0; c < s; ++c) cp.u(idx(next.which[r]), idx(c)) = next.coef[r][idx(c)];
        out.push_back(std::move(cp));
        continue;
      }
      next.minor = unit_minor(next.rows, p);
      if (!next.minor) continue;
      run(depth + 1, next, 0, candidates(depth + 1), out);
    }
    for (int b : cols) st.u_prime(idx(rho), idx(b)) = 0;
  }
};

CharacterPair reversed(const CharacterPair& c) {
  return {std::vector<i64>(c.psi.rbegin(), c.psi.rend()), std::vector<i64>(c.psi_prime.rbegin(), c.psi_prime.rend())};
}

int bound_for(const Modulus& mod, const OracleOptions& opt) {
  const int B = opt.denominator_bound < 0 ? mod.height() : opt.denominator_bound;
  if (B < mod.height()) throw std::invalid_argument("denominator bound must be at least the sum of r");
  return B;
}

}  // namespace

std::vector<CosetPair> enumerate_cosets(const RationalMatrix& n, long p, int B, const OracleOptions& opt) {
  if (B < 0) throw std::invalid_argument("denominator bound must be nonnegative");
  std::atomic<u64> visited{0};
  Search s(n, p, B, opt.gamma0_level, opt.budget, visited);
  s.init();
  const u64 first = s.candidates(0);
  const int threads = static_cast<int>(std::min<u64>(static_cast<u64>(resolve_thread_count(opt.threads)), first));
  std::vector<std::vector<CosetPair>> parts(idx(std::max(threads, 1)));
  auto work = [&](int t) {
    Search::State st{{}, {}, {}, std::nullopt, RationalMatrix::identity(n.size())};
    const u64 lo = first * static_cast<u64>(t) / static_cast<u64>(threads);
    const u64 hi = first * static_cast<u64>(t + 1) / static_cast<u64>(threads);
    s.run(0, st, lo, hi, parts[idx(t)]);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(idx(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t);
        } catch (...) {
          errors[idx(t)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<CosetPair> out;
  for (auto& part : parts)
    for (auto& cp : part) out.push_back(std::move(cp));
  return out;
}

std::vector<CosetPair> enumerate_kloosterman_set(const WeylElement& w, const Modulus& mod, const OracleOptions& opt) {
  if (static_cast<int>(mod.r.size()) != w.rank()) throw std::invalid_argument("exponent vector must have length N");
  return enumerate_cosets(mod.fc() * w.signed_matrix(), mod.p, bound_for(mod, opt), opt);
}

SumResult oracle_sum_monomial(const RationalMatrix& n, long p, const CharacterPair& chars, int B,
                              const OracleOptions& opt) {
  const std::size_t N = n.size() - 1;
  if (chars.psi.size() != N || chars.psi_prime.size() != N)
    throw std::invalid_argument("character vectors must have length N");
  const std::vector<CosetPair> set = enumerate_cosets(n, p, B, opt);
  std::vector<mpq_class> args;
  int K = 1;
  for (const CosetPair& cp : set) {
    mpq_class a = 0;
    for (std::size_t i = 1; i <= N; ++i) {
      a += mpq_class(static_cast<long>(chars.psi[i - 1])) * cp.u(i - 1, i);
      a += mpq_class(static_cast<long>(chars.psi_prime[i - 1])) * cp.u_prime(i - 1, i);
    }
    a.canonicalize();
    K = std::max(K, character_exponent(a, p));
    args.push_back(a);
  }
  SumResult res;
  res.value = CyclotomicValue::prime_power(p, K);
  for (const mpq_class& a : args) res.value.accumulate(character_residue(a, p, K));
  res.cell_count = set.size();
  res.finalize();
  return res;
}

SumResult oracle_sum(const WeylElement& w, const Modulus& mod, const CharacterPair& chars, const OracleOptions& opt) {
  if (static_cast<int>(mod.r.size()) != w.rank()) throw std::invalid_argument("exponent vector must have length N");
  return oracle_sum_monomial(mod.fc() * w.signed_matrix(), mod.p, chars, bound_for(mod, opt), opt);
}

SumResult oracle_sum_left_quotient(const RationalMatrix& n, long p, const CharacterPair& chars, int B,
                                   const OracleOptions& opt) {
  // J u^T J keeps U and sends entry (i, i+1) to (N+1-i, N+2-i).
  const CharacterPair r = reversed(chars);
  return oracle_sum_monomial(n.antitranspose(), p, CharacterPair{r.psi_prime, r.psi}, B, opt);
}

bool oracle_bound_stable(const WeylElement& w, const Modulus& mod, const OracleOptions& opt) {
  const int B = bound_for(mod, opt);
  auto keys = [&](int b) {
    OracleOptions o = opt;
    o.denominator_bound = b;
    std::set<std::string> out;
    for (const CosetPair& cp : enumerate_kloosterman_set(w, mod, o)) out.insert(cp.u_prime.str());
    return out;
  };
  return keys(B) == keys(B + 1);
}

InversionCheck inversion_identity_check(const WeylElement& w, const Modulus& mod, const CharacterPair& chars,
                                        const OracleOptions& opt) {
  InversionCheck ic;
  ic.lhs = oracle_sum(w, mod, chars, opt);
  const RationalMatrix n = mod.fc() * w.signed_matrix();
  CharacterPair swapped{chars.psi_prime, chars.psi};
  for (auto& x : swapped.psi) x = -x;
  for (auto& x : swapped.psi_prime) x = -x;
  ic.rhs = oracle_sum_left_quotient(n.inverse(), mod.p, swapped, bound_for(mod, opt), opt);
  ic.holds = ic.lhs.value.exactly_equals(ic.rhs.value);
  return ic;
}

}  // namespace kloost
