#pragma once

#include <string>
#include <vector>

#include "kloost/bounds.hpp"
#include "kloost/kloosterman.hpp"
#include "kloost/oracle.hpp"

namespace kloost {

struct CheckCase {
  std::string label;
  bool ok = true;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckCase> cases;
  // |S| <= |X(n)| + error, checked on every evaluated sum.
  u64 trivial_checked = 0;
  u64 trivial_violations = 0;
  double seconds = 0.0;

  std::size_t failures() const;
  bool passed() const { return failures() == 0 && trivial_violations == 0; }
  void add(std::string label, bool ok, std::string detail = {});
  void merge(const SuiteReport& other);
};

struct SuiteConfig {
  std::vector<long> primes{2, 3};
  int max_dim = 5;              // largest N + 1 considered
  int max_r = 4;                // bound on the sum of r
  int cases = 200;              // random cells per composition
  int m_max = 3;                // bound on sampled m_{i,j}
  unsigned long long seed = 1;  // drives every sampled cell
  std::vector<int> blocks;      // when set, only this composition
  std::vector<int> r;           // when set, only this exponent vector
  int level = 1;                // Gamma_0 level exponent
  EvalOptions eval;
};

std::vector<std::vector<int>> enumerate_compositions(int min_parts, int max_parts, int max_dim);
std::vector<std::vector<int>> enumerate_exponent_vectors(int N, int max_sum);

// Checks |S| against trivial_bound(w, r, p) and records the outcome.
void check_trivial_bound(SuiteReport& rep, const WeylElement& w, const Modulus& mod, const SumResult& s);

SuiteReport verify_gl2_recovery(const SuiteConfig& cfg);
SuiteReport verify_path_formulas(const SuiteConfig& cfg);
SuiteReport verify_recursion(const SuiteConfig& cfg);
SuiteReport verify_counts(const SuiteConfig& cfg, int oracle_max_dim = 3);
SuiteReport verify_oracle(const SuiteConfig& cfg);
// Also reports the failure count of the printed pairing as a diagnostic case that always passes.
SuiteReport verify_scaling(const SuiteConfig& cfg);
SuiteReport verify_gamma0(const SuiteConfig& cfg);
SuiteReport verify_inversion(const SuiteConfig& cfg);
SuiteReport verify_hyper_kloosterman(const SuiteConfig& cfg);

struct BoundsTable {
  std::vector<BoundReport> rows;
  SuiteReport report;  // generation, trivial-bound and Weil checks
};
BoundsTable bounds_table(const SuiteConfig& cfg);

}  // namespace kloost
