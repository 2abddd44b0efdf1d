#pragma once

#include <functional>
#include <map>
#include <vector>

#include "kloost/bruhat.hpp"
#include "kloost/padic.hpp"
#include "kloost/rational_matrix.hpp"
#include "kloost/sum_result.hpp"
#include "kloost/weyl.hpp"

namespace kloost {

struct Modulus {
  long p = 2;
  std::vector<int> r;  // r_1..r_N, nonnegative

  RationalMatrix fc() const { return torus_matrix(r, p); }
  int height() const;  // sum of r_l
};

struct CharacterPair {
  std::vector<i64> psi;
  std::vector<i64> psi_prime;

  static CharacterPair zero(int N) { return {std::vector<i64>(N, 0), std::vector<i64>(N, 0)}; }
};

// Exponents e with C_{i,j} = p^e.
using CellModuli = std::map<Vertex, int>;

// How d_{i,j} represents c_{i,j}^{-1}: modulo C_{i,j}, or as the exact p-adic inverse.
enum class InverseConvention { cell_modulus, exact };

// Phase evaluation route.
//   edge_formula:  edge sums over E_i, E'_i (fast modular path)
//   closed_form:   closed-form parametrization, exact rationals per tuple
//   factorization: L_{i,i+1}, R_{i,i+1} of the factored b-product (exact inverse only)
enum class SumRoute { edge_formula, closed_form, factorization };

struct EvalOptions {
  u64 budget = 100000000;  // cap on representatives enumerated per call
  int threads = 0;         // 0: KLOOSTERMAN_THREADS, else hardware concurrency
  InverseConvention inverse = InverseConvention::cell_modulus;
  SumRoute route = SumRoute::edge_formula;
};

int resolve_thread_count(int requested);

std::vector<ModuliAssignment> moduli_assignments(const WeylElement& w, const std::vector<int>& r);
bool is_valid_assignment(const WeylElement& w, const ModuliAssignment& m, const std::vector<int>& r);
CellModuli cell_moduli(const WeylElement& w, const ModuliAssignment& m);

// |C_w(m)|, computed from the moduli.
u64 representative_count(const WeylElement& w, const ModuliAssignment& m, long p);

// Calls visit(values) for every c-tuple, values aligned with index_set(w).ordered,
// lexicographic with the first vertex slowest.
void for_each_representative(const WeylElement& w, const ModuliAssignment& m, long p,
                             const std::function<void(const std::vector<u64>&)>& visit);

// Phase arguments of a single cell, as exact rationals. d_override replaces d_{i,j} where given.
using DOverride = std::map<Vertex, mpq_class>;
mpq_class edge_formula_argument(const WeylElement& w, const CellCoordinates& cell, const CharacterPair& chars,
                                const DOverride* d_override = nullptr);
mpq_class closed_form_argument(const WeylElement& w, const CellCoordinates& cell, const CharacterPair& chars,
                            const DOverride* d_override = nullptr);
mpq_class factorization_argument(const WeylElement& w, const CellCoordinates& cell, const CharacterPair& chars);

SumResult evaluate_cell_sum(const WeylElement& w, const ModuliAssignment& m, long p, const CharacterPair& chars,
                            const EvalOptions& opt = {});
SumResult evaluate_sum(const WeylElement& w, const Modulus& mod, const CharacterPair& chars,
                       const EvalOptions& opt = {});

// Data of the Gamma_0(p^l) sum after the T_w transform.
struct Gamma0Transform {
  WeylElement w;
  std::vector<int> r;
  CharacterPair chars;
  Vertex restricted_vertex;  // carries the s_1 letter; m there must be >= l
};
Gamma0Transform gamma0_transform(const WeylElement& w, const Modulus& mod, const CharacterPair& chars);
SumResult evaluate_sum_gamma0(const WeylElement& w, const Modulus& mod, const CharacterPair& chars, int level,
                              const EvalOptions& opt = {});

SumResult classical_kloosterman(i64 mm, i64 nn, u64 c);
SumResult hyper_kloosterman(i64 a, int k, long p, int r);

// Which psi entry is multiplied by p alongside the diagonal j - i = k - 1.
// corrected: psi_{N+1-k} and psi'_{N+1-k}; printed: psi_k and psi'_{N+1-k}.
// The two agree for GL_2; only the corrected pairing holds from GL_3 on.
enum class ScalingPairing { corrected, printed };

// Kl(m, psi, psi', w) = p^{-(N+1-k)k} Kl(m~, psi~, psi'~, w) for the long element.
bool scaling_identity_check(const WeylElement& w, const ModuliAssignment& m, long p, const CharacterPair& chars,
                            int k, const EvalOptions& opt = {}, ScalingPairing pairing = ScalingPairing::corrected);

}  // namespace kloost
