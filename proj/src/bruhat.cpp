#include "kloost/bruhat.hpp"

#include <algorithm>
#include <numeric>

#include "kloost/diagram.hpp"
#include "kloost/padic.hpp"

namespace kloost {

namespace {

mpq_class ppow(long p, int e) {
  mpz_class x;
  mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(e)));
  if (e >= 0) return mpq_class(x);
  mpq_class q(mpz_class(1), x);
  q.canonicalize();
  return q;
}

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

void CellCoordinates::set(const Vertex& v, mpz_class c, int m) {
  if (m < 0) throw std::invalid_argument("negative cell exponent");
  if (m > 0 && mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p_)))
    throw std::invalid_argument("c must be a p-unit when m > 0");
  entries_[v] = CellEntry{std::move(c), m};
}

const CellEntry& CellCoordinates::at(const Vertex& v) const {
  auto it = entries_.find(v);
  if (it == entries_.end()) throw std::out_of_range("vertex " + v.str() + " not in cell");
  return it->second;
}

int CellCoordinates::m(const Vertex& v) const {
  auto it = entries_.find(v);
  return it == entries_.end() ? 0 : it->second.m;
}

mpq_class CellCoordinates::c(const Vertex& v) const {
  auto it = entries_.find(v);
  return it == entries_.end() ? mpq_class(1) : mpq_class(it->second.c);
}

mpq_class CellCoordinates::d(const Vertex& v) const {
  auto it = entries_.find(v);
  if (it == entries_.end()) return 1;
  if (it->second.m == 0) return 0;
  mpq_class q(mpz_class(1), it->second.c);
  q.canonicalize();
  return q;
}

mpq_class CellCoordinates::a(const Vertex& v) const {
  const CellEntry& e = at(v);
  return mpq_class(e.c) * ppow(p_, -e.m);
}

std::vector<int> CellCoordinates::exponent_vector(int N) const {
  std::vector<int> r(idx(N), 0);
  for (const auto& [v, e] : entries_)
    for (int l = v.i; l <= v.j; ++l) r[idx(l - 1)] += e.m;
  return r;
}

CellCoordinates sample_cell(const WeylElement& w, long p, int m_max, std::mt19937_64& rng) {
  CellCoordinates cell(p);
  std::uniform_int_distribution<int> mdist(0, m_max);
  std::uniform_int_distribution<long> free_c(-20, 20), unit_c(1, 60), sign(0, 1);
  for (const Vertex& v : w.gamma_labels()) {
    int m = mdist(rng);
    long c;
    if (m == 0) {
      c = free_c(rng);
    } else {
      do c = unit_c(rng);
      while (c % p == 0);
      if (sign(rng)) c = -c;
    }
    cell.set(v, mpz_class(c), m);
  }
  return cell;
}

RationalMatrix b_alpha(const Vertex& root, const mpq_class& a, long p, int size) {
  if (root.i < 1 || root.j < root.i || root.j >= size) throw std::out_of_range("root outside GL_size");
  RationalMatrix b = RationalMatrix::identity(idx(size));
  const std::size_t r0 = idx(root.i - 1), r1 = idx(root.j);
  const int m = mu(a, p);
  if (m == 0) {
    b(r0, r0) = 0;
    b(r0, r1) = -1;
    b(r1, r0) = 1;
    b(r1, r1) = a;
  } else {
    const mpq_class c = a * ppow(p, m);
    b(r0, r0) = 1 / c;
    b(r0, r1) = 0;
    b(r1, r0) = ppow(p, m);
    b(r1, r1) = c;
  }
  return b;
}

RationalMatrix b_product(const WeylElement& w, const CellCoordinates& cell) {
  const auto& word = w.word();
  const auto& labels = w.gamma_labels();
  RationalMatrix A = RationalMatrix::identity(idx(w.size()));
  for (std::size_t t = 0; t < word.size(); ++t) {
    if (!cell.contains(labels[t])) throw std::invalid_argument("cell misses vertex " + labels[t].str());
    A = A * b_alpha(Vertex{word[t], word[t]}, cell.a(labels[t]), cell.prime(), w.size());
  }
  return A;
}

BruhatTriple bruhat_factorize(const RationalMatrix& M, const WeylElement& w) {
  const std::size_t n = M.size();
  if (n != idx(w.size())) throw std::invalid_argument("matrix size does not match w");
  const auto& sigma = w.permutation();

  // Row reduction bottom-up: each row loses the pivot columns of the rows below it.
  RationalMatrix CR = M;
  for (std::size_t i = n; i-- > 0;) {
    std::vector<std::size_t> lower;
    for (std::size_t j = i + 1; j < n; ++j) lower.push_back(j);
    std::sort(lower.begin(), lower.end(), [&](std::size_t a, std::size_t b) { return sigma[a] < sigma[b]; });
    for (std::size_t j : lower) {
      const std::size_t col = idx(sigma[j]);
      if (CR(i, col) == 0) continue;
      const mpq_class f = CR(i, col) / CR(j, col);
      for (std::size_t c = 0; c < n; ++c) CR(i, c) -= f * CR(j, c);
    }
    std::size_t lead = 0;
    while (lead < n && CR(i, lead) == 0) ++lead;
    if (lead != idx(sigma[i]))
      throw BruhatError("not in the Bruhat cell of " + w.str() + ": minor ending at row " + std::to_string(i + 1) +
                        " has the wrong pivot");
  }

  BruhatTriple t{RationalMatrix(n), RationalMatrix(n), RationalMatrix(n)};
  for (std::size_t i = 0; i < n; ++i) t.C(i, idx(sigma[i])) = CR(i, idx(sigma[i]));
  t.R = t.C.inverse() * CR;
  RationalMatrix support(n);
  for (auto [a, b] : uw_support(sigma)) support(idx(a), idx(b)) = 1;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || t.R(a, b) == 0) continue;
      if (support(a, b) == 0) throw BruhatError("right factor leaves U_w at (" + std::to_string(a + 1) + "," +
                                                std::to_string(b + 1) + ")");
    }
  t.L = M * CR.inverse();
  if (!t.L.is_upper_unipotent()) throw BruhatError("left factor is not unipotent");
  return t;
}

RationalMatrix torus_matrix(const std::vector<int>& r, long p) {
  const std::size_t n = r.size() + 1;
  RationalMatrix f(n);
  for (std::size_t i = 0; i < n; ++i) {
    int prev = i == 0 ? 0 : r[i - 1];
    int cur = i < r.size() ? r[i] : 0;
    f(i, i) = ppow(p, prev - cur);
  }
  return f;
}

namespace {

// Minimal-path sum with the per-class factors of the X/Y or Z/W formulas.
mpq_class path_sum(const Diagram& d, const CellCoordinates& cell, Vertex from, Vertex to, PathRule rule,
                   int extra_exponent) {
  const long p = cell.prime();
  mpq_class total = 0;
  for (const MinimalPath& path : minimal_paths(d, from, to, rule)) {
    mpq_class val = 1;
    int e = extra_exponent;
    for (std::size_t t = 0; t < path.vertices.size(); ++t) {
      const Vertex& v = path.vertices[t];
      const VertexClass cl = path.classes[t];
      if (rule == PathRule::X || rule == PathRule::Y) {
        if (cl == VertexClass::rd) val *= cell.c(v);
        if (cl == VertexClass::lu) val *= cell.d(v);
        e -= cell.m(v);
      } else {
        if (cl == VertexClass::ru) val *= cell.c(v);
        if (cl == VertexClass::ld) val *= cell.d(v);
        if (cl == VertexClass::lr) {
          val *= cell.c(v) * cell.d(v) - 1;
          e -= cell.m(v);
        }
        if (cl == VertexClass::du) e += cell.m(v);
      }
    }
    if (val != 0) total += val * ppow(p, e);
  }
  return total;
}

// Two-block element w_{k,n+1-k} in GL_{n+1}, vertices (i,j) with 1 <= i <= k <= j <= n.
BruhatTriple two_block_triple(int k, int n, const CellCoordinates& cell) {
  const int size = n + 1, h = n + 1 - k;
  const long p = cell.prime();
  const Diagram d = build_diagram(make_admissible({k, h}));
  BruhatTriple t{RationalMatrix::identity(idx(size)), RationalMatrix(idx(size)), RationalMatrix::identity(idx(size))};

  for (int i = 1; i <= h; ++i)
    for (int j = 1; j <= k; ++j) {
      mpq_class x = path_sum(d, cell, {1, k + i - 1}, {j, n}, PathRule::X, 0);
      if ((i + n + 1 - k) % 2) x = -x;
      t.R(idx(i - 1), idx(h + j - 1)) = x;
    }
  for (int i = 1; i <= k; ++i)
    for (int j = i; j <= k; ++j) {
      int extra = 0;
      for (int l = k; l <= n; ++l) extra += cell.m({j, l});
      t.L(idx(i - 1), idx(j - 1)) = path_sum(d, cell, {i, k}, {j, n}, PathRule::Y, extra);
    }
  for (int j = 1; j <= h; ++j) {
    int extra = 0;
    for (int l = 1; l <= k; ++l) extra -= cell.m({l, j + k - 1});
    for (int i = 1; i <= k; ++i)
      t.L(idx(i - 1), idx(k + j - 1)) = path_sum(d, cell, {1, j + k - 1}, {i, k}, PathRule::Z, extra);
    for (int i = 1; i <= j; ++i)
      t.L(idx(k + i - 1), idx(k + j - 1)) = path_sum(d, cell, {1, j + k - 1}, {k, i + k - 1}, PathRule::W, extra);
  }
  for (int i = 1; i <= k; ++i) {
    int e = 0;
    for (int l = k; l <= n; ++l) e -= cell.m({i, l});
    mpq_class v = ppow(p, e);
    if ((n + 1 - k) % 2) v = -v;
    t.C(idx(i - 1), idx(h + i - 1)) = v;
  }
  for (int i = 1; i <= h; ++i) {
    int e = 0;
    for (int l = 1; l <= k; ++l) e += cell.m({l, i + k - 1});
    t.C(idx(k + i - 1), idx(i - 1)) = ppow(p, e);
  }
  return t;
}

struct Peeled {
  std::vector<mpq_class> left;   // superdiagonal of L
  RationalMatrix central;
  std::vector<mpq_class> right;  // superdiagonal of R
  RationalMatrix right_block;
  int right_block_offset = 0;
};

Peeled peel(const std::vector<int>& blocks, const CellCoordinates& cell) {
  const int size = std::accumulate(blocks.begin(), blocks.end(), 0);
  const int N = size - 1;
  const long p = cell.prime();
  if (blocks.size() == 2) {
    BruhatTriple t = two_block_triple(blocks[0], N, cell);
    Peeled out{{}, t.C, {}, t.R, 0};
    for (int i = 0; i < N; ++i) {
      out.left.push_back(t.L(idx(i), idx(i + 1)));
      out.right.push_back(t.R(idx(i), idx(i + 1)));
    }
    return out;
  }

  const int k = blocks[0], n1 = blocks[0] + blocks[1], n = n1 - 1, f = blocks[2];
  const int M = size - n1;
  std::vector<int> merged{n1};
  merged.insert(merged.end(), blocks.begin() + 2, blocks.end());
  Peeled outer = peel(merged, cell);
  BruhatTriple inner = two_block_triple(k, n, cell);

  Peeled out;
  out.right_block = inner.R;
  out.right_block_offset = M;

  // Left factor: the inner entry is conjugated by the ratio of neighbouring diagonal entries
  // of C', i.e. p^{sum_{j=n+1}^{N} (m_{i+1,j} - m_{i,j})}.
  for (int i = 1; i <= N; ++i) {
    mpq_class v = outer.left[idx(i - 1)];
    if (i <= n) {
      int e = 0;
      for (int j = n + 1; j <= N; ++j) e += cell.m({i + 1, j}) - cell.m({i, j});
      v += inner.L(idx(i - 1), idx(i)) * ppow(p, e);
    }
    out.left.push_back(v);
  }

  RationalMatrix D = RationalMatrix::identity(idx(size));
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) D(idx(M + a), idx(M + b)) = inner.C(idx(a), idx(b));
  out.central = outer.central * D;

  out.right.assign(idx(N), 0);
  for (int i = 0; i + 1 < M; ++i) out.right[idx(i)] = outer.right[idx(i)];
  mpq_class link = 0;
  for (int j = 1; j <= k + 1; ++j) {
    int e = -cell.m({j, n + f});
    for (int l = 1; l < j; ++l) e += cell.m({l, k}) - cell.m({l, n + f});
    const mpq_class dj = j <= k ? cell.d({j, k}) : mpq_class(1);
    link += cell.c({j, n + f}) * dj * ppow(p, e);
  }
  out.right[idx(M - 1)] = link;
  for (int a = 0; a < n; ++a) out.right[idx(M + a)] = inner.R(idx(a), idx(a + 1));
  return out;
}

}  // namespace

BruhatTriple path_formula_entries(const WeylElement& w, const CellCoordinates& cell) {
  if (w.block_count() != 2) throw std::invalid_argument("path formulas need a two-block element");
  return two_block_triple(w.blocks()[0], w.rank(), cell);
}

RecursionEntries recursion_entries(const WeylElement& w, const CellCoordinates& cell) {
  if (w.block_count() < 3) throw std::invalid_argument("recursion needs at least three blocks");
  Peeled p = peel(w.blocks(), cell);
  return RecursionEntries{p.left, p.central, p.right, p.right_block, p.right_block_offset};
}

}  // namespace kloost
