#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "kloost/kloosterman.hpp"

namespace kloost {

// sum over M_w(r) of p^{ht}(1 - 1/p)^{kappa(m)}, i.e. |X(n)|.
mpz_class trivial_bound(const WeylElement& w, const std::vector<int>& r, long p);

// tau(c) sqrt(c) sqrt(gcd(m, n, c)).
double weil_bound(i64 mm, i64 nn, u64 c);

// max_j min(|psi_j|_p^{-1/2}, p^{r_j/2}), with |0|_p^{-1/2} = infinity.
double c_constant(const std::vector<i64>& psi, const std::vector<int>& r, long p);

struct BoundReport {
  long p = 2;
  std::vector<int> blocks;
  std::vector<int> r;
  CharacterPair chars;
  int length = 0;
  mpz_class trivial;
  double observed = 0.0;
  double observed_error = 0.0;
  double C = 1.0;
  double length_exponent = 0.0;       // exponent of p in (prod p^{r_k})^{1 - 1/(4 l)}
  double rank_length_exponent = 0.0;  // exponent of p in (prod p^{r_k})^{1 - 1/(2 N l)}
  double length_bound = 0.0;          // C^{l/2} p^{length_exponent}
  double rank_length_bound = 0.0;     // C p^{rank_length_exponent}
  std::optional<double> weil;  // rank one only
  double ratio_trivial = 0.0;
  double ratio_length = 0.0;
  double ratio_rank_length = 0.0;
  bool trivial_ok = false;
  bool weil_ok = true;
};

BoundReport thm_bounds(const WeylElement& w, const std::vector<int>& r, const CharacterPair& chars, long p,
                       const EvalOptions& opt = {});

}  // namespace kloost
