#include "kloost/bounds.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace kloost {

namespace {

u64 divisor_count(u64 c) {
  u64 n = 1;
  for (u64 q = 2; q * q <= c; ++q) {
    u64 e = 0;
    while (c % q == 0) {
      c /= q;
      ++e;
    }
    n *= e + 1;
  }
  return c > 1 ? n * 2 : n;
}

u64 gcd3(i64 a, i64 b, u64 c) {
  u64 g = std::gcd(static_cast<u64>(a < 0 ? -a : a), static_cast<u64>(b < 0 ? -b : b));
  return std::gcd(g, c);
}

}  // namespace

mpz_class trivial_bound(const WeylElement& w, const std::vector<int>& r, long p) {
  const int ht = std::accumulate(r.begin(), r.end(), 0);
  mpz_class total = 0;
  for (const ModuliAssignment& m : moduli_assignments(w, r)) {
    const int k = m.nonzero_count();
    mpz_class a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(ht - k));
    mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(p - 1), static_cast<unsigned long>(k));
    total += a * b;
  }
  return total;
}

double weil_bound(i64 mm, i64 nn, u64 c) {
  if (c == 0) throw std::invalid_argument("modulus must be positive");
  return static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(c)) *
         std::sqrt(static_cast<double>(gcd3(mm, nn, c)));
}

double c_constant(const std::vector<i64>& psi, const std::vector<int>& r, long p) {
  if (psi.size() != r.size()) throw std::invalid_argument("psi and r must have the same length");
  double C = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    double from_psi = std::numeric_limits<double>::infinity();
    if (psi[j] != 0) from_psi = std::pow(static_cast<double>(p), valuation(mpz_class(static_cast<long>(psi[j])), p) / 2.0);
    C = std::max(C, std::min(from_psi, std::pow(static_cast<double>(p), r[j] / 2.0)));
  }
  return r.empty() ? 1.0 : C;
}

BoundReport thm_bounds(const WeylElement& w, const std::vector<int>& r, const CharacterPair& chars, long p,
                       const EvalOptions& opt) {
  BoundReport b;
  b.p = p;
  b.blocks = w.blocks();
  b.r = r;
  b.chars = chars;
  b.length = length(w);
  b.trivial = trivial_bound(w, r, p);
  const SumResult s = evaluate_sum(w, Modulus{p, r}, chars, opt);
  b.observed = s.magnitude.value;
  b.observed_error = s.magnitude.error;
  b.C = c_constant(chars.psi, r, p);
  const double ht = std::accumulate(r.begin(), r.end(), 0.0);
  const double l = b.length;
  const double N = w.rank();
  b.length_exponent = ht * (1.0 - 1.0 / (4.0 * l));
  b.rank_length_exponent = ht * (1.0 - 1.0 / (2.0 * N * l));
  b.length_bound = std::pow(b.C, l / 2.0) * std::pow(static_cast<double>(p), b.length_exponent);
  b.rank_length_bound = b.C * std::pow(static_cast<double>(p), b.rank_length_exponent);
  const double triv = b.trivial.get_d();
  b.ratio_trivial = triv > 0 ? b.observed / triv : 0.0;
  b.ratio_length = b.observed / b.length_bound;
  b.ratio_rank_length = b.observed / b.rank_length_bound;
  b.trivial_ok = b.observed <= triv + b.observed_error && mpz_class(static_cast<unsigned long>(s.cell_count)) == b.trivial;
  if (w.rank() == 1) {
    b.weil = weil_bound(chars.psi[0], chars.psi_prime[0], ipow(static_cast<u64>(p), static_cast<unsigned>(r[0])));
    b.weil_ok = b.observed <= *b.weil + b.observed_error;
  }
  return b;
}

}  // namespace kloost
