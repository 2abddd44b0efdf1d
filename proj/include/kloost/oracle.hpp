#pragma once

#include <vector>

#include "kloost/kloosterman.hpp"
#include "kloost/rational_matrix.hpp"
#include "kloost/sum_result.hpp"

namespace kloost {

// u in U(Z_p)\U(Q_p), u' in U_w(Q_p)/U_w(Z_p); u' has every support entry in [0, 1).
struct CosetPair {
  RationalMatrix u;
  RationalMatrix u_prime;
};

struct OracleOptions {
  int denominator_bound = -1;  // B; negative means sum of r
  int gamma0_level = 0;        // l > 0 restricts to Gamma_0(p^l)
  u64 budget = 100000000;      // cap on search nodes
  int threads = 0;
};

// Double cosets of U n U' meeting GL(Z_p), for an arbitrary monomial n; U' = U ∩ n^{-1} U^- n.
std::vector<CosetPair> enumerate_cosets(const RationalMatrix& n, long p, int B, const OracleOptions& opt = {});

std::vector<CosetPair> enumerate_kloosterman_set(const WeylElement& w, const Modulus& mod,
                                                 const OracleOptions& opt = {});

// sum over the cosets of psi(u) psi'(u').
SumResult oracle_sum_monomial(const RationalMatrix& n, long p, const CharacterPair& chars, int B,
                              const OracleOptions& opt = {});
SumResult oracle_sum(const WeylElement& w, const Modulus& mod, const CharacterPair& chars,
                     const OracleOptions& opt = {});

// Kl' with the left quotient by U ∩ n U^- n^{-1} and the right quotient by U(Z_p),
// computed through A -> J A^T J, which swaps the two conventions.
SumResult oracle_sum_left_quotient(const RationalMatrix& n, long p, const CharacterPair& chars, int B,
                                   const OracleOptions& opt = {});

// Re-enumerates with B + 1 and compares the coset sets.
bool oracle_bound_stable(const WeylElement& w, const Modulus& mod, const OracleOptions& opt = {});

// Kl(psi, psi', fc w) against Kl'(-psi', -psi, (fc w)^{-1}), both by the oracle.
struct InversionCheck {
  SumResult lhs;
  SumResult rhs;
  bool holds = false;
};
InversionCheck inversion_identity_check(const WeylElement& w, const Modulus& mod, const CharacterPair& chars,
                                        const OracleOptions& opt = {});

}  // namespace kloost
