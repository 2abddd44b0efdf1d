#include "kloost/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "kloost/bruhat.hpp"

namespace kloost {

namespace {

using Clock = std::chrono::steady_clock;

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join(const std::vector<i64>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string case_label(const std::vector<int>& blocks, long p, const std::vector<int>& r, const CharacterPair* ch = nullptr) {
  std::string s = "blocks=" + join(blocks) + " p=" + std::to_string(p) + " r=" + join(r);
  if (ch) s += " psi=" + join(ch->psi) + " psi'=" + join(ch->psi_prime);
  return s;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// The i-th positive integer prime to p.
i64 nth_unit(long p, int i) {
  i64 x = 0;
  for (int seen = -1; seen < i;)
    if (++x % p != 0) ++seen;
  return x;
}

// Unit, p-divisible and mixed character pairs of rank N.
std::vector<CharacterPair> character_families(int N, long p) {
  const std::size_t n = static_cast<std::size_t>(N);
  CharacterPair ones{std::vector<i64>(n, 1), std::vector<i64>(n, 1)};
  CharacterPair units{std::vector<i64>(n), std::vector<i64>(n)};
  CharacterPair divisible{std::vector<i64>(n), std::vector<i64>(n)};
  CharacterPair mixed{std::vector<i64>(n), std::vector<i64>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int k = static_cast<int>(i);
    units.psi[i] = nth_unit(p, k + 1);
    units.psi_prime[i] = nth_unit(p, 2 * k + 2);
    divisible.psi[i] = p * nth_unit(p, k);
    divisible.psi_prime[i] = p * p * nth_unit(p, k + 1);
    mixed.psi[i] = i % 2 == 0 ? p * nth_unit(p, k) : nth_unit(p, k + 2);
    mixed.psi_prime[i] = i % 2 == 0 ? nth_unit(p, k + 1) : 0;
  }
  return {ones, units, divisible, mixed};
}

std::vector<std::vector<int>> selected_blocks(const SuiteConfig& cfg, std::vector<std::vector<int>> defaults) {
  if (!cfg.blocks.empty()) return {cfg.blocks};
  return defaults;
}

std::vector<std::vector<int>> selected_r(const SuiteConfig& cfg, int N, int max_sum) {
  if (!cfg.r.empty()) {
    if (static_cast<int>(cfg.r.size()) != N) throw std::invalid_argument("r has the wrong length for the composition");
    return {cfg.r};
  }
  return enumerate_exponent_vectors(N, max_sum);
}

OracleOptions oracle_options(const SuiteConfig& cfg) {
  OracleOptions o;
  o.budget = cfg.eval.budget;
  o.threads = cfg.eval.threads;
  return o;
}

}  // namespace

std::size_t SuiteReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += !c.ok;
  return n;
}

void SuiteReport::add(std::string label, bool ok, std::string detail) {
  cases.push_back({std::move(label), ok, std::move(detail)});
}

void SuiteReport::merge(const SuiteReport& other) {
  for (const auto& c : other.cases) cases.push_back({other.suite + ": " + c.label, c.ok, c.detail});
  trivial_checked += other.trivial_checked;
  trivial_violations += other.trivial_violations;
  seconds += other.seconds;
}

std::vector<std::vector<int>> enumerate_compositions(int min_parts, int max_parts, int max_dim) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    const int parts = static_cast<int>(cur.size());
    if (parts >= min_parts && parts <= max_parts) out.push_back(cur);
    if (parts == max_parts) return;
    for (int k = 1; k <= left; ++k) {
      cur.push_back(k);
      rec(left - k);
      cur.pop_back();
    }
  };
  rec(max_dim);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int sa = 0, sb = 0;
    for (int x : a) sa += x;
    for (int x : b) sb += x;
    return sa < sb;
  });
  return out;
}

std::vector<std::vector<int>> enumerate_exponent_vectors(int N, int max_sum) {
  std::vector<std::vector<int>> out;
  std::vector<int> r(static_cast<std::size_t>(N), 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == N) {
      out.push_back(r);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      r[static_cast<std::size_t>(k)] = x;
      rec(k + 1, left - x);
    }
  };
  rec(0, max_sum);
  return out;
}

void check_trivial_bound(SuiteReport& rep, const WeylElement& w, const Modulus& mod, const SumResult& s) {
  const double triv = trivial_bound(w, mod.r, mod.p).get_d();
  ++rep.trivial_checked;
  if (s.magnitude.value > triv + s.magnitude.error) ++rep.trivial_violations;
}

SuiteReport verify_gl2_recovery(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"gl2_recovery", {}, 0, 0, 0.0};
  const WeylElement w = make_admissible({1, 1});
  for (long p : cfg.primes)
    for (int r = 0; r <= cfg.max_r; ++r)
      for (i64 a : {i64{0}, i64{1}, i64{2}, i64{p}, 2 * i64{p}})
        for (i64 b : {i64{0}, i64{1}, i64{2}, i64{p}, 2 * i64{p}}) {
          const Modulus mod{p, {r}};
          const SumResult s = evaluate_sum(w, mod, {{a}, {b}}, cfg.eval);
          const SumResult c = classical_kloosterman(a, b, ipow(static_cast<u64>(p), static_cast<unsigned>(r)));
          const double diff = std::abs(s.value.complex_value() - c.value.complex_value());
          const bool ok = s.value.exactly_equals(c.value) && diff < 1e-6;
          std::ostringstream d;
          d << "S=" << c.value.complex_value() << " diff=" << diff;
          rep.add("p=" + std::to_string(p) + " r=" + std::to_string(r) + " psi=" + std::to_string(a) +
                      " psi'=" + std::to_string(b),
                  ok, d.str());
          check_trivial_bound(rep, w, mod, s);
        }
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_path_formulas(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"path_formulas", {}, 0, 0, 0.0};
  std::mt19937_64 rng(cfg.seed);
  for (const auto& blocks : selected_blocks(cfg, enumerate_compositions(2, 2, cfg.max_dim))) {
    const WeylElement w = make_admissible(blocks);
    if (w.block_count() != 2) throw std::invalid_argument("path formulas need a two-block composition");
    for (long p : cfg.primes) {
      int bad = 0;
      for (int t = 0; t < cfg.cases; ++t) {
        const CellCoordinates cell = sample_cell(w, p, cfg.m_max, rng);
        const BruhatTriple direct = bruhat_factorize(b_product(w, cell), w);
        const BruhatTriple paths = path_formula_entries(w, cell);
        bad += !(paths.L == direct.L && paths.C == direct.C && paths.R == direct.R);
      }
      rep.add("blocks=" + join(blocks) + " p=" + std::to_string(p), bad == 0,
              std::to_string(cfg.cases) + " cells, " + std::to_string(bad) + " mismatches");
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_recursion(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"recursion", {}, 0, 0, 0.0};
  std::mt19937_64 rng(cfg.seed);
  for (const auto& blocks : selected_blocks(cfg, enumerate_compositions(3, 3, cfg.max_dim))) {
    const WeylElement w = make_admissible(blocks);
    if (w.block_count() < 3) throw std::invalid_argument("the recursion needs at least three blocks");
    for (long p : cfg.primes) {
      int bad = 0;
      for (int t = 0; t < cfg.cases; ++t) {
        const CellCoordinates cell = sample_cell(w, p, cfg.m_max, rng);
        const BruhatTriple direct = bruhat_factorize(b_product(w, cell), w);
        const RecursionEntries r = recursion_entries(w, cell);
        bool ok = r.central == direct.C;
        for (int i = 0; i < w.rank(); ++i) {
          const auto u = static_cast<std::size_t>(i);
          ok = ok && r.left_superdiagonal[u] == direct.L(u, u + 1) && r.right_superdiagonal[u] == direct.R(u, u + 1);
        }
        const auto off = static_cast<std::size_t>(r.right_block_offset);
        for (std::size_t a = 0; a < r.right_block.size(); ++a)
          for (std::size_t b = 0; b < r.right_block.size(); ++b) ok = ok && r.right_block(a, b) == direct.R(off + a, off + b);
        bad += !ok;
      }
      rep.add("blocks=" + join(blocks) + " p=" + std::to_string(p), bad == 0,
              std::to_string(cfg.cases) + " cells, " + std::to_string(bad) + " mismatches");
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_counts(const SuiteConfig& cfg, int oracle_max_dim) {
  const auto t0 = Clock::now();
  SuiteReport rep{"counts", {}, 0, 0, 0.0};
  for (const auto& blocks : selected_blocks(cfg, enumerate_compositions(1, cfg.max_dim, cfg.max_dim))) {
    const WeylElement w = make_admissible(blocks);
    for (long p : cfg.primes)
      for (const auto& r : selected_r(cfg, w.rank(), cfg.max_r)) {
        int ht = 0;
        for (int x : r) ht += x;
        u64 total = 0;
        bool per_assignment = true;
        for (const auto& m : moduli_assignments(w, r)) {
          u64 streamed = 0;
          for_each_representative(w, m, p, [&](const std::vector<u64>&) { ++streamed; });
          u64 expect = ipow(static_cast<u64>(p), static_cast<unsigned>(ht - m.nonzero_count()));
          for (int i = 0; i < m.nonzero_count(); ++i) expect *= static_cast<u64>(p - 1);
          per_assignment = per_assignment && streamed == expect && representative_count(w, m, p) == expect;
          total += streamed;
        }
        const mpz_class triv = trivial_bound(w, r, p);
        bool ok = per_assignment && mpz_class(static_cast<unsigned long>(total)) == triv;
        std::string detail = "count=" + std::to_string(total) + " trivial=" + triv.get_str();
        if (w.size() <= oracle_max_dim) {
          const std::size_t oracle = enumerate_kloosterman_set(w, {p, r}, oracle_options(cfg)).size();
          ok = ok && mpz_class(static_cast<unsigned long>(oracle)) == triv;
          detail += " oracle=" + std::to_string(oracle);
        }
        rep.add(case_label(blocks, p, r), ok, detail);
      }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_oracle(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"oracle", {}, 0, 0, 0.0};
  for (const auto& blocks : selected_blocks(cfg, {{1, 1, 1}, {1, 2}, {2, 1}})) {
    const WeylElement w = make_admissible(blocks);
    for (long p : cfg.primes)
      for (const auto& r : selected_r(cfg, w.rank(), cfg.max_r))
        for (const auto& ch : character_families(w.rank(), p)) {
          const Modulus mod{p, r};
          const SumResult o = oracle_sum(w, mod, ch, oracle_options(cfg));
          const SumResult s = evaluate_sum(w, mod, ch, cfg.eval);
          const bool ok = o.value.exactly_equals(s.value) && o.cell_count == s.cell_count;
          std::ostringstream d;
          d << "S=" << s.value.complex_value() << " cells=" << s.cell_count << " oracle_cells=" << o.cell_count;
          rep.add(case_label(blocks, p, r, &ch), ok, d.str());
          check_trivial_bound(rep, w, mod, s);
          check_trivial_bound(rep, w, mod, o);
        }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_scaling(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"scaling", {}, 0, 0, 0.0};
  int printed_checked = 0, printed_failed = 0;
  for (const auto& blocks : selected_blocks(cfg, {{1, 1}, {1, 1, 1}})) {
    const WeylElement w = make_admissible(blocks);
    const IndexSet I = index_set(w);
    for (long p : cfg.primes)
      for (const auto& r : selected_r(cfg, w.rank(), cfg.max_r))
        for (const auto& m : moduli_assignments(w, r)) {
          if (m.nonzero_count() != static_cast<int>(I.size())) continue;
          for (const auto& ch : character_families(w.rank(), p))
            for (int k = 1; k <= w.rank(); ++k) {
              const bool ok = scaling_identity_check(w, m, p, ch, k, cfg.eval);
              rep.add(case_label(blocks, p, r, &ch) + " m=" + m.str() + " k=" + std::to_string(k), ok);
              ++printed_checked;
              printed_failed += !scaling_identity_check(w, m, p, ch, k, cfg.eval, ScalingPairing::printed);
            }
        }
  }
  rep.add("diagnostic: psi_k pairing", true,
          std::to_string(printed_failed) + " of " + std::to_string(printed_checked) + " cases fail");
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_gamma0(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"gamma0", {}, 0, 0, 0.0};
  for (const auto& blocks : selected_blocks(cfg, {{1, 1}, {1, 1, 1}, {1, 2}, {2, 1}})) {
    const WeylElement w = make_admissible(blocks);
    for (long p : cfg.primes)
      for (const auto& r : selected_r(cfg, w.rank(), cfg.max_r))
        for (const auto& ch : character_families(w.rank(), p)) {
          const Modulus mod{p, r};
          OracleOptions o = oracle_options(cfg);
          o.gamma0_level = cfg.level;
          const SumResult direct = oracle_sum(w, mod, ch, o);
          const SumResult s = evaluate_sum_gamma0(w, mod, ch, cfg.level, cfg.eval);
          bool ok = direct.value.exactly_equals(s.value) && direct.cell_count == s.cell_count;
          bool all_zero = true;
          for (int x : r) all_zero = all_zero && x == 0;
          if (all_zero && cfg.level >= 1) ok = ok && s.value.is_zero() && s.cell_count == 0;
          std::ostringstream d;
          d << "S=" << s.value.complex_value() << " cells=" << s.cell_count;
          rep.add(case_label(blocks, p, r, &ch) + " l=" + std::to_string(cfg.level), ok, d.str());
          check_trivial_bound(rep, w, mod, s);
        }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_inversion(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"inversion", {}, 0, 0, 0.0};
  for (const auto& blocks : selected_blocks(cfg, {{1, 1, 1}, {1, 2}, {2, 1}})) {
    const WeylElement w = make_admissible(blocks);
    for (long p : cfg.primes)
      for (const auto& r : selected_r(cfg, w.rank(), cfg.max_r))
        for (const auto& ch : character_families(w.rank(), p)) {
          const InversionCheck ic = inversion_identity_check(w, {p, r}, ch, oracle_options(cfg));
          std::ostringstream d;
          d << "lhs=" << ic.lhs.value.complex_value() << " rhs=" << ic.rhs.value.complex_value();
          rep.add(case_label(blocks, p, r, &ch), ic.holds, d.str());
        }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SuiteReport verify_hyper_kloosterman(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport rep{"hyper_kloosterman", {}, 0, 0, 0.0};
  for (int N : {2, 3})
    for (long p : cfg.primes)
      for (int m : {1, 2}) {
        std::vector<int> r(static_cast<std::size_t>(N));
        for (int j = 1; j <= N; ++j) r[static_cast<std::size_t>(j - 1)] = (N + 1 - j) * m;
        const WeylElement w = make_admissible({1, N});
        if (trivial_bound(w, r, p) > cfg.eval.budget) continue;
        CharacterPair ch{std::vector<i64>(static_cast<std::size_t>(N), 1), std::vector<i64>(static_cast<std::size_t>(N), 0)};
        ch.psi[1] = nth_unit(p, 1);
        ch.psi_prime.back() = nth_unit(p, 2);
        i64 a = ch.psi_prime.back();
        for (i64 x : ch.psi) a *= x;
        const SumResult s = evaluate_sum(w, {p, r}, ch, cfg.eval);
        const SumResult h = hyper_kloosterman(a, N + 1, p, m);
        const i64 f = static_cast<i64>(ipow(static_cast<u64>(p), static_cast<unsigned>(m * N * (N - 1) / 2)));
        rep.add(case_label({1, N}, p, r, &ch), h.value.scaled(f).exactly_equals(s.value));
        check_trivial_bound(rep, w, {p, r}, s);
      }
  rep.seconds = seconds_since(t0);
  return rep;
}

BoundsTable bounds_table(const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  BoundsTable t;
  t.report.suite = "bounds";
  for (const auto& blocks : selected_blocks(cfg, {{1, 1, 1}, {1, 2}, {2, 1}})) {
    const WeylElement w = make_admissible(blocks);
    for (long p : cfg.primes)
      for (const auto& r : selected_r(cfg, w.rank(), cfg.max_r))
        for (const auto& ch : character_families(w.rank(), p)) {
          BoundReport b = thm_bounds(w, r, ch, p, cfg.eval);
          t.report.add(case_label(blocks, p, r, &ch), b.trivial_ok && b.weil_ok,
                       "observed=" + std::to_string(b.observed) + " trivial=" + b.trivial.get_str());
          ++t.report.trivial_checked;
          t.rows.push_back(std::move(b));
        }
  }
  // Weil bound on GL_2 over the moduli and characters of the recovery sweep.
  if (cfg.blocks.empty()) {
    const WeylElement w = make_admissible({1, 1});
    for (long p : {2L, 3L, 5L, 7L})
      for (int r = 0; r <= cfg.max_r; ++r)
        for (i64 a : {i64{0}, i64{1}, i64{2}, i64{p}, 2 * i64{p}})
          for (i64 b : {i64{0}, i64{1}, i64{2}, i64{p}, 2 * i64{p}}) {
            const BoundReport br = thm_bounds(w, {r}, {{a}, {b}}, p, cfg.eval);
            t.report.add("weil p=" + std::to_string(p) + " r=" + std::to_string(r) + " psi=" + std::to_string(a) +
                             " psi'=" + std::to_string(b),
                         br.weil_ok && br.trivial_ok,
                         "observed=" + std::to_string(br.observed) + " weil=" + std::to_string(br.weil.value_or(0.0)));
            ++t.report.trivial_checked;
          }
  }
  t.report.seconds = seconds_since(t0);
  return t;
}

}  // namespace kloost
