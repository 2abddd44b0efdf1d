#include "kloost/kloosterman.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "kloost/diagram.hpp"

namespace kloost {

namespace {

mpq_class qpow(long p, int e) {
  mpz_class x;
  mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(e)));
  if (e >= 0) return mpq_class(x);
  mpq_class q(mpz_class(1), x);
  q.canonicalize();
  return q;
}

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

i64 char_at(const std::vector<i64>& v, int i) {
  return i >= 1 && i <= static_cast<int>(v.size()) ? v[idx(i - 1)] : 0;
}

void check_chars(const WeylElement& w, const CharacterPair& chars) {
  const std::size_t N = static_cast<std::size_t>(w.rank());
  if (chars.psi.size() != N || chars.psi_prime.size() != N)
    throw std::invalid_argument("character vectors must have length N = " + std::to_string(N));
}

// One summand coef * c_src * d_tgt * p^exp of the edge formula, on vertex positions.
struct Term {
  i64 coef = 0;
  int src = -1;  // -1: missing endpoint (factor one)
  int tgt = -1;
  int exp = 0;
};

std::vector<Term> edge_terms(const WeylElement& w, const std::vector<Vertex>& order,
                             const std::function<int(const Vertex&)>& m, const CharacterPair& chars) {
  const Diagram dg = build_diagram(w);
  const EdgeSets sets = edge_sets(dg);
  auto pos = [&](const std::optional<Vertex>& v) {
    if (!v) return -1;
    auto it = std::find(order.begin(), order.end(), *v);
    return it == order.end() ? -1 : static_cast<int>(it - order.begin());
  };
  auto mv = [&](const std::optional<Vertex>& v) { return v ? m(*v) : 0; };
  std::vector<Term> out;
  for (int i = 1; i <= w.rank(); ++i) {
    int acc = 0;
    for (const Edge& e : sets.plain[idx(i)]) {
      out.push_back({char_at(chars.psi, i), pos(e.source), pos(e.target), -mv(e.target) + acc});
      acc += mv(e.source) - mv(e.target);
    }
    acc = 0;
    for (const Edge& e : sets.dotted[idx(i)]) {
      out.push_back({char_at(chars.psi_prime, i), pos(e.source), pos(e.target), -mv(e.source) + acc});
      acc += mv(e.target) - mv(e.source);
    }
  }
  return out;
}

u64 saturating_count(const WeylElement& w, const ModuliAssignment& m, long p) {
  const CellModuli C = cell_moduli(w, m);
  mpz_class total = 1;
  for (const auto& [v, e] : C) {
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    if (m.at(v) > 0) pe = pe / p * (p - 1);
    total *= pe;
  }
  if (total > mpz_class(static_cast<unsigned long>(kMaxModulus))) return kMaxModulus;
  return static_cast<u64>(total.get_ui());
}

struct VertexRange {
  u64 modulus = 1;  // C_{i,j}
  bool unit = false;
};

std::vector<VertexRange> vertex_ranges(const WeylElement& w, const ModuliAssignment& m, long p,
                                       const std::vector<Vertex>& order) {
  const CellModuli C = cell_moduli(w, m);
  std::vector<VertexRange> out;
  for (const Vertex& v : order) out.push_back({ipow(static_cast<u64>(p), static_cast<unsigned>(C.at(v))), m.at(v) > 0});
  return out;
}

bool admissible_value(u64 c, const VertexRange& r, long p) { return !r.unit || c % static_cast<u64>(p) != 0; }

// Odometer over positions [first, n) with position `first` restricted to [lo, hi).
template <class F>
void odometer(const std::vector<VertexRange>& ranges, long p, u64 lo, u64 hi, F&& visit) {
  const std::size_t n = ranges.size();
  std::vector<u64> val(n, 0);
  if (n == 0) {
    visit(val);
    return;
  }
  auto next_valid = [&](std::size_t k, u64 from, u64 limit) {
    u64 c = from;
    while (c < limit && !admissible_value(c, ranges[k], p)) ++c;
    return c;
  };
  std::vector<u64> limit(n);
  limit[0] = std::min(hi, ranges[0].modulus);
  for (std::size_t k = 1; k < n; ++k) limit[k] = ranges[k].modulus;
  val[0] = next_valid(0, lo, limit[0]);
  if (val[0] >= limit[0]) return;
  for (std::size_t k = 1; k < n; ++k) val[k] = next_valid(k, 0, limit[k]);
  while (true) {
    visit(val);
    std::size_t k = n;
    while (k > 0) {
      --k;
      val[k] = next_valid(k, val[k] + 1, limit[k]);
      if (val[k] < limit[k]) break;
      if (k == 0) return;
      val[k] = next_valid(k, 0, limit[k]);
    }
  }
}

CellCoordinates make_cell(const std::vector<Vertex>& order, const std::vector<u64>& c, const ModuliAssignment& m,
                          long p) {
  CellCoordinates cell(p);
  for (std::size_t t = 0; t < order.size(); ++t) cell.set(order[t], mpz_class(static_cast<unsigned long>(c[t])), m.at(order[t]));
  return cell;
}

// Per-thread histogram of residues mod P.
class Histogram {
 public:
  explicit Histogram(u64 P) : P_(P) {
    if (P <= (u64{1} << 20)) dense_.assign(P, 0);
  }
  void add(u64 t, i64 n = 1) {
    if (!dense_.empty())
      dense_[t] += n;
    else
      sparse_[t] += n;
  }
  void merge_into(CyclotomicValue& v) const {
    if (!dense_.empty()) {
      for (u64 t = 0; t < P_; ++t)
        if (dense_[t]) v.accumulate(t, dense_[t]);
    } else {
      std::vector<std::pair<u64, i64>> items(sparse_.begin(), sparse_.end());
      std::sort(items.begin(), items.end());
      for (auto [t, n] : items) v.accumulate(t, n);
    }
  }

 private:
  u64 P_;
  std::vector<i64> dense_;
  std::unordered_map<u64, i64> sparse_;
};

}  // namespace

int ModuliAssignment::nonzero_count() const {
  int k = 0;
  for (const auto& [v, x] : m) k += x > 0;
  return k;
}

std::string ModuliAssignment::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [v, x] : m) {
    os << (first ? "" : " ") << "m" << v.i << v.j << "=" << x;
    first = false;
  }
  os << "}";
  return os.str();
}

int Modulus::height() const { return std::accumulate(r.begin(), r.end(), 0); }

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KLOOSTERMAN_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ModuliAssignment> moduli_assignments(const WeylElement& w, const std::vector<int>& r) {
  if (static_cast<int>(r.size()) != w.rank()) throw std::invalid_argument("exponent vector must have length N");
  for (int x : r)
    if (x < 0) throw std::invalid_argument("exponent vector entries must be nonnegative");
  const std::vector<Vertex> order = index_set(w).ordered;
  std::vector<ModuliAssignment> out;
  std::vector<int> used(r.size(), 0);
  std::vector<int> cur(order.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == order.size()) {
      if (used != r) return;
      ModuliAssignment a;
      for (std::size_t t = 0; t < order.size(); ++t) a.m[order[t]] = cur[t];
      out.push_back(std::move(a));
      return;
    }
    const Vertex v = order[k];
    int cap = INT32_MAX;
    for (int l = v.i; l <= v.j; ++l) cap = std::min(cap, r[idx(l - 1)] - used[idx(l - 1)]);
    for (int x = 0; x <= cap; ++x) {
      cur[k] = x;
      for (int l = v.i; l <= v.j; ++l) used[idx(l - 1)] += x;
      rec(k + 1);
      for (int l = v.i; l <= v.j; ++l) used[idx(l - 1)] -= x;
    }
  };
  rec(0);
  return out;
}

bool is_valid_assignment(const WeylElement& w, const ModuliAssignment& m, const std::vector<int>& r) {
  if (static_cast<int>(r.size()) != w.rank()) return false;
  const IndexSet I = index_set(w);
  std::vector<int> sum(r.size(), 0);
  for (const auto& [v, x] : m.m) {
    if (!I.contains(v) || x < 0) return false;
    for (int l = v.i; l <= v.j; ++l) sum[idx(l - 1)] += x;
  }
  return sum == r;
}

CellModuli cell_moduli(const WeylElement& w, const ModuliAssignment& m) {
  const IndexSet I = index_set(w);
  CellModuli out;
  for (std::size_t l = 1; l <= I.levels.size(); ++l) {
    const int top = w.kappa(static_cast<int>(l) + 1) - 1;
    for (const Vertex& v : I.levels[l - 1]) {
      int e = 0;
      for (int a = 1; a <= v.i; ++a) e += m.at({a, v.j});
      for (int a = v.j + 1; a <= top; ++a) e += m.at({v.i, a});
      out[v] = e;
    }
  }
  return out;
}

u64 representative_count(const WeylElement& w, const ModuliAssignment& m, long p) {
  return saturating_count(w, m, p);
}

void for_each_representative(const WeylElement& w, const ModuliAssignment& m, long p,
                             const std::function<void(const std::vector<u64>&)>& visit) {
  const std::vector<Vertex> order = index_set(w).ordered;
  const auto ranges = vertex_ranges(w, m, p, order);
  odometer(ranges, p, 0, ranges.empty() ? 1 : ranges[0].modulus, visit);
}

mpq_class edge_formula_argument(const WeylElement& w, const CellCoordinates& cell, const CharacterPair& chars,
                                const DOverride* d_override) {
  check_chars(w, chars);
  const std::vector<Vertex> order = index_set(w).ordered;
  auto m = [&](const Vertex& v) { return cell.m(v); };
  const long p = cell.prime();
  mpq_class total = 0;
  for (const Term& t : edge_terms(w, order, m, chars)) {
    if (t.coef == 0) continue;
    mpq_class c = t.src < 0 ? mpq_class(1) : cell.c(order[idx(t.src)]);
    mpq_class d = 1;
    if (t.tgt >= 0) {
      const Vertex& v = order[idx(t.tgt)];
      d = cell.d(v);
      if (d_override && d_override->count(v)) d = d_override->at(v);
    }
    total += mpq_class(static_cast<long>(t.coef)) * c * d * qpow(p, t.exp);
  }
  total.canonicalize();
  return total;
}

mpq_class closed_form_argument(const WeylElement& w, const CellCoordinates& cell, const CharacterPair& chars,
                            const DOverride* d_override) {
  check_chars(w, chars);
  const long p = cell.prime();
  const int N = w.rank();
  const int nb = w.block_count();
  auto m = [&](int i, int j) { return cell.m({i, j}); };
  auto c = [&](int i, int j) { return cell.c({i, j}); };
  auto d = [&](int i, int j) -> mpq_class {
    if (i > j) return 1;
    if (d_override) {
      auto it = d_override->find({i, j});
      if (it != d_override->end()) return it->second;
    }
    return cell.d({i, j});
  };
  auto psi = [&](int i) { return mpq_class(static_cast<long>(char_at(chars.psi, i))); };
  auto psip = [&](int i) { return mpq_class(static_cast<long>(char_at(chars.psi_prime, i))); };
  auto kap = [&](int q) { return q == 0 ? 0 : w.kappa(q); };

  mpq_class total = 0;
  for (int q = 1; q < nb; ++q) {
    const int kq = kap(q), kq1 = kap(q + 1), kqm = kap(q - 1);
    auto tail = [&](int a) {
      int s = 0;
      for (int l = kq1; l <= N; ++l) s += m(a + 1, l) - m(a, l);
      return s;
    };
    for (int i = 1; i < kq; ++i)
      for (int j = kq; j < kq1; ++j) {
        int e = -m(i, j) + tail(i);
        for (int l = kq; l < j; ++l) e += m(i + 1, l) - m(i, l);
        total += psi(i) * c(i + 1, j) * d(i, j) * qpow(p, e);
      }
    total += psi(kq) * d(kq, kq) * qpow(p, -m(kq, kq) + tail(kq));
    for (int j = kq + 1; j < kq1; ++j)
      for (int i = 1; i <= kq; ++i) {
        int e = -m(i, j) + tail(j);
        for (int l = i + 1; l <= kq; ++l) e += m(l, j - 1) - m(l, j);
        total += psi(j) * c(i, j - 1) * d(i, j) * qpow(p, e);
      }
    for (int i = 1; i <= kqm + 1; ++i) {
      int e = -m(i, kq1 - 1);
      for (int jj = 1; jj < i; ++jj) e += m(jj, kqm) - m(jj, kq1 - 1);
      total += psip(N + 1 - kq) * c(i, kq1 - 1) * d(i, kqm) * qpow(p, e);
    }
  }
  total.canonicalize();
  return total;
}

mpq_class factorization_argument(const WeylElement& w, const CellCoordinates& cell, const CharacterPair& chars) {
  check_chars(w, chars);
  const BruhatTriple t = bruhat_factorize(b_product(w, cell), w);
  mpq_class total = 0;
  for (int i = 1; i <= w.rank(); ++i) {
    total += mpq_class(static_cast<long>(char_at(chars.psi, i))) * t.L(idx(i - 1), idx(i));
    total += mpq_class(static_cast<long>(char_at(chars.psi_prime, i))) * t.R(idx(i - 1), idx(i));
  }
  return total;
}

SumResult evaluate_cell_sum(const WeylElement& w, const ModuliAssignment& m, long p, const CharacterPair& chars,
                            const EvalOptions& opt) {
  if (w.block_count() < 2) throw std::invalid_argument("Kloosterman sums need at least two blocks");
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  check_chars(w, chars);
  const std::vector<Vertex> order = index_set(w).ordered;
  for (const auto& [v, x] : m.m)
    if (std::find(order.begin(), order.end(), v) == order.end() || x < 0)
      throw std::invalid_argument("assignment has an entry outside I_w");

  const u64 count = saturating_count(w, m, p);
  if (count > opt.budget)
    throw BudgetExceeded("enumeration of " + std::to_string(count) + " representatives exceeds budget " +
                         std::to_string(opt.budget));
  if (opt.route == SumRoute::factorization && opt.inverse != InverseConvention::exact)
    throw std::invalid_argument("factorization route requires the exact inverse convention");

  const auto ranges = vertex_ranges(w, m, p, order);
  std::vector<Term> terms = edge_terms(w, order, [&](const Vertex& v) { return m.at(v); }, chars);
  int K = 1;
  std::erase_if(terms, [&](const Term& t) {
    return t.coef == 0 || t.exp >= 0 || (t.tgt >= 0 && m.at(order[idx(t.tgt)]) == 0);
  });
  for (const Term& t : terms) K = std::max(K, -t.exp);
  int msum = 0;
  for (const auto& [v, x] : m.m) msum += x;
  if (opt.route != SumRoute::edge_formula) K = std::max(K, msum + 1);
  const u64 P = ipow(static_cast<u64>(p), static_cast<unsigned>(K));

  std::vector<u64> coef;
  for (const Term& t : terms) {
    u64 scale = ipow(static_cast<u64>(p), static_cast<unsigned>(K + t.exp));
    coef.push_back(mulmod(reduce_mod(t.coef, P), scale, P));
  }

  auto inverse_of = [&](std::size_t k, u64 c) -> u64 {
    if (!ranges[k].unit) return 0;
    return opt.inverse == InverseConvention::cell_modulus ? mod_inverse(static_cast<i64>(c), ranges[k].modulus, p)
                                                          : mod_inverse(static_cast<i64>(c), P, p);
  };

  auto run_chunk = [&](u64 lo, u64 hi, Histogram& h) {
    std::vector<u64> dv(order.size());
    odometer(ranges, p, lo, hi, [&](const std::vector<u64>& c) {
      for (std::size_t k = 0; k < c.size(); ++k) dv[k] = inverse_of(k, c[k]);
      if (opt.route == SumRoute::edge_formula) {
        u64 t = 0;
        for (std::size_t a = 0; a < terms.size(); ++a) {
          u64 x = coef[a];
          if (terms[a].src >= 0) x = mulmod(x, c[idx(terms[a].src)] % P, P);
          if (terms[a].tgt >= 0) x = mulmod(x, dv[idx(terms[a].tgt)] % P, P);
          t += x;
          if (t >= P) t -= P;
        }
        h.add(t);
        return;
      }
      CellCoordinates cell = make_cell(order, c, m, p);
      mpq_class arg;
      if (opt.route == SumRoute::factorization) {
        arg = factorization_argument(w, cell, chars);
      } else if (opt.inverse == InverseConvention::cell_modulus) {
        DOverride dov;
        for (std::size_t k = 0; k < order.size(); ++k)
          if (ranges[k].unit) dov[order[k]] = mpq_class(mpz_class(static_cast<unsigned long>(dv[k])));
        arg = closed_form_argument(w, cell, chars, &dov);
      } else {
        arg = closed_form_argument(w, cell, chars);
      }
      h.add(character_residue(arg, p, K));
    });
  };

  const u64 outer = ranges.empty() ? 1 : ranges[0].modulus;
  const int threads = static_cast<int>(std::min<u64>(static_cast<u64>(resolve_thread_count(opt.threads)), outer));
  std::vector<Histogram> hist(static_cast<std::size_t>(threads), Histogram(P));
  if (threads <= 1) {
    run_chunk(0, outer, hist[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      const u64 lo = outer * static_cast<u64>(t) / static_cast<u64>(threads);
      const u64 hi = outer * static_cast<u64>(t + 1) / static_cast<u64>(threads);
      pool.emplace_back([&, t, lo, hi] {
        try {
          run_chunk(lo, hi, hist[idx(t)]);
        } catch (...) {
          errors[idx(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SumResult res;
  res.value = CyclotomicValue::prime_power(p, K);
  for (const Histogram& h : hist) h.merge_into(res.value);
  res.cell_count = count;
  res.finalize();
  res.breakdown.push_back({m, res.value, count});
  return res;
}

SumResult evaluate_sum(const WeylElement& w, const Modulus& mod, const CharacterPair& chars, const EvalOptions& opt) {
  const auto assignments = moduli_assignments(w, mod.r);
  u64 total = 0;
  for (const auto& a : assignments) {
    total += saturating_count(w, a, mod.p);
    if (total > opt.budget)
      throw BudgetExceeded("enumeration exceeds budget " + std::to_string(opt.budget));
  }
  SumResult res;
  res.value = CyclotomicValue(1);
  for (const auto& a : assignments) {
    SumResult part = evaluate_cell_sum(w, a, mod.p, chars, opt);
    res.value += part.value;
    res.cell_count += part.cell_count;
    res.breakdown.push_back(part.breakdown.front());
  }
  res.finalize();
  return res;
}

Gamma0Transform gamma0_transform(const WeylElement& w, const Modulus& mod, const CharacterPair& chars) {
  check_chars(w, chars);
  std::vector<int> rev(w.blocks().rbegin(), w.blocks().rend());
  WeylElement wt = make_admissible(rev);
  const std::size_t n = static_cast<std::size_t>(w.size());
  // theta(A) = ((J A J)^T)^{-1} sends the signed w to a diagonal sign times the signed w'.
  const RationalMatrix theta = w.signed_matrix().antitranspose().inverse();
  const RationalMatrix t = theta * wt.signed_matrix().inverse();
  std::vector<int> sign(n);
  for (std::size_t i = 0; i < n; ++i) sign[i] = t(i, i) > 0 ? 1 : -1;

  const int N = w.rank();
  Gamma0Transform g{wt, std::vector<int>(mod.r.rbegin(), mod.r.rend()), CharacterPair::zero(N), Vertex{}};
  for (int i = 1; i <= N; ++i) {
    g.chars.psi[idx(i - 1)] = -sign[idx(i - 1)] * sign[idx(i)] * chars.psi[idx(N - i)];
    g.chars.psi_prime[idx(i - 1)] = -chars.psi_prime[idx(N - i)];
  }
  g.restricted_vertex = *wt.s1_vertex();
  return g;
}

SumResult evaluate_sum_gamma0(const WeylElement& w, const Modulus& mod, const CharacterPair& chars, int level,
                              const EvalOptions& opt) {
  if (level < 0) throw std::invalid_argument("level exponent must be nonnegative");
  if (level == 0) return evaluate_sum(w, mod, chars, opt);
  if (w.block_count() < 2) throw std::invalid_argument("Kloosterman sums need at least two blocks");
  const Gamma0Transform g = gamma0_transform(w, mod, chars);
  std::vector<ModuliAssignment> kept;
  u64 total = 0;
  for (auto& a : moduli_assignments(g.w, g.r))
    if (a.at(g.restricted_vertex) >= level) {
      total += saturating_count(g.w, a, mod.p);
      if (total > opt.budget) throw BudgetExceeded("enumeration exceeds budget " + std::to_string(opt.budget));
      kept.push_back(std::move(a));
    }
  SumResult res;
  res.value = CyclotomicValue(1);
  for (const auto& a : kept) {
    SumResult part = evaluate_cell_sum(g.w, a, mod.p, g.chars, opt);
    res.value += part.value;
    res.cell_count += part.cell_count;
    res.breakdown.push_back(part.breakdown.front());
  }
  res.finalize();
  return res;
}

SumResult classical_kloosterman(i64 mm, i64 nn, u64 c) {
  if (c == 0) throw std::invalid_argument("modulus must be positive");
  SumResult res;
  res.value = CyclotomicValue(c);
  mpz_class C(static_cast<unsigned long>(c));
  for (u64 x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    mpz_class xi;
    mpz_class X(static_cast<unsigned long>(x));
    if (c == 1)
      xi = 0;
    else
      mpz_invert(xi.get_mpz_t(), X.get_mpz_t(), C.get_mpz_t());
    u64 t = (mulmod(reduce_mod(mm, c), x, c) + mulmod(reduce_mod(nn, c), xi.get_ui(), c)) % c;
    res.value.accumulate(t);
    ++res.cell_count;
  }
  res.finalize();
  return res;
}

SumResult hyper_kloosterman(i64 a, int k, long p, int r) {
  if (k < 1) throw std::invalid_argument("dimension must be positive");
  if (r < 0) throw std::invalid_argument("exponent must be nonnegative");
  if (a % p == 0) throw ArithmeticError("hyper-Kloosterman argument must be a p-unit");
  const u64 P = ipow(static_cast<u64>(p), static_cast<unsigned>(r));
  SumResult res;
  res.value = CyclotomicValue(P);
  std::vector<u64> units;
  for (u64 x = 0; x < P; ++x)
    if (P == 1 || x % static_cast<u64>(p) != 0) units.push_back(x);
  const u64 A = reduce_mod(a, P);
  std::vector<std::size_t> pick(static_cast<std::size_t>(k - 1), 0);
  while (true) {
    u64 prod = 1 % P, sum = 0;
    for (std::size_t t : pick) {
      prod = mulmod(prod, units[t], P);
      sum = (sum + units[t]) % P;
    }
    u64 last = P == 1 ? 0 : mulmod(A, mod_inverse(static_cast<i64>(prod), P, p), P);
    res.value.accumulate((sum + last) % P);
    ++res.cell_count;
    std::size_t q = pick.size();
    while (q > 0 && ++pick[q - 1] == units.size()) pick[--q] = 0;
    if (q == 0) break;
  }
  res.finalize();
  return res;
}

bool scaling_identity_check(const WeylElement& w, const ModuliAssignment& m, long p, const CharacterPair& chars,
                            int k, const EvalOptions& opt, ScalingPairing pairing) {
  if (!w.is_long_element()) throw std::invalid_argument("scaling identity needs the long element");
  const int N = w.rank();
  if (k < 1 || k > N) throw std::invalid_argument("k must lie in [1, N]");
  const IndexSet I = index_set(w);
  for (const Vertex& v : I.ordered)
    if (m.at(v) < 1) throw std::invalid_argument("scaling identity needs every m_{i,j} >= 1");
  ModuliAssignment mt = m;
  for (const Vertex& v : I.ordered)
    if (v.j - v.i == k - 1) mt.m[v] += 1;
  CharacterPair ct = chars;
  ct.psi[idx(pairing == ScalingPairing::corrected ? N - k : k - 1)] *= p;
  ct.psi_prime[idx(N - k)] *= p;
  const SumResult lhs = evaluate_cell_sum(w, m, p, chars, opt);
  const SumResult rhs = evaluate_cell_sum(w, mt, p, ct, opt);
  const i64 factor = static_cast<i64>(ipow(static_cast<u64>(p), static_cast<unsigned>((N + 1 - k) * k)));
  return lhs.value.scaled(factor).exactly_equals(rhs.value);
}

}  // namespace kloost
