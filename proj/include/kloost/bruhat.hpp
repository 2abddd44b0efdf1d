#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "kloost/rational_matrix.hpp"
#include "kloost/weyl.hpp"

namespace kloost {

// a_{i,j} = c_{i,j} p^{-m_{i,j}}; c is a p-unit when m > 0.
struct CellEntry {
  mpz_class c;
  int m = 0;
};

class CellCoordinates {
 public:
  explicit CellCoordinates(long p = 2) : p_(p) {}

  long prime() const { return p_; }
  void set(const Vertex& v, mpz_class c, int m);
  bool contains(const Vertex& v) const { return entries_.count(v) != 0; }
  const CellEntry& at(const Vertex& v) const;
  const std::map<Vertex, CellEntry>& entries() const { return entries_; }

  // Positions outside the cell count as m = 0 and c = d = 1.
  int m(const Vertex& v) const;
  mpq_class c(const Vertex& v) const;
  // Exact inverse 1/c when m > 0, zero when m = 0.
  mpq_class d(const Vertex& v) const;
  mpq_class a(const Vertex& v) const;

  std::vector<int> exponent_vector(int N) const;  // r_l = sum_{i<=l<=j} m_{i,j}

 private:
  long p_;
  std::map<Vertex, CellEntry> entries_;
};

// Random cell over I_w with m_{i,j} in [0, m_max]; units c in +-[1,60], other c in [-20,20].
CellCoordinates sample_cell(const WeylElement& w, long p, int m_max, std::mt19937_64& rng);

// phi_{alpha_{i,j}} of ((0,-1),(1,a)) if a is integral, else of ((c^{-1},0),(p^m,c)).
RationalMatrix b_alpha(const Vertex& root, const mpq_class& a, long p, int size);
RationalMatrix b_product(const WeylElement& w, const CellCoordinates& cell);

struct BruhatTriple {
  RationalMatrix L;
  RationalMatrix C;
  RationalMatrix R;
};

class BruhatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unique M = L C R with L unipotent upper triangular, C monomial on w's pattern, R in U_w.
BruhatTriple bruhat_factorize(const RationalMatrix& M, const WeylElement& w);

// fc(r) = diag(p^{-r_1}, p^{r_1-r_2}, ..., p^{r_N}).
RationalMatrix torus_matrix(const std::vector<int>& r, long p);

// Full L, C, R of a two-block element from the minimal-path sums.
BruhatTriple path_formula_entries(const WeylElement& w, const CellCoordinates& cell);

struct RecursionEntries {
  std::vector<mpq_class> left_superdiagonal;   // entry (i, i+1), 0-based i
  RationalMatrix central;
  std::vector<mpq_class> right_superdiagonal;  // entry (i, i+1), 0-based i
  RationalMatrix right_block;                  // bottom-right block, from the two-block formulas
  int right_block_offset = 0;
};

// Entries obtained by peeling off the top two blocks, for w with at least three blocks.
RecursionEntries recursion_entries(const WeylElement& w, const CellCoordinates& cell);

}  // namespace kloost
