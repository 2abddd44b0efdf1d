#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace kloost {

using i64 = std::int64_t;
using u64 = std::uint64_t;

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest modulus used for character arguments; keeps products inside __int128.
inline constexpr u64 kMaxModulus = u64{1} << 62;

u64 ipow(u64 base, unsigned e);  // throws ArithmeticError past kMaxModulus
bool is_prime(i64 n);

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}
// Representative of x in [0, m).
u64 reduce_mod(i64 x, u64 m);
u64 reduce_mod(const mpz_class& x, u64 m);

// v_p of a nonzero integer / rational. Zero has no valuation and throws.
int valuation(const mpz_class& x, long p);
int valuation(const mpq_class& x, long p);
bool is_p_integral(const mpq_class& x, long p);

// a = numerator / p^exponent. Canonical: p does not divide numerator, or exponent = 0.
struct PadicScalar {
  mpz_class numerator;
  int exponent = 0;
  long p = 2;

  static PadicScalar canonical(mpz_class numerator, int exponent, long p);
  mpq_class value() const;
};

int mu(const PadicScalar& a);
// max(0, -v_p(a)) for any rational a; 0 for a = 0.
int mu(const mpq_class& a, long p);

// Inverse of c modulo `modulus` (a power of p), in [0, modulus).
u64 mod_inverse(i64 c, u64 modulus, long p);
u64 mod_inverse(const mpz_class& c, u64 modulus, long p);

// Residue t with Psi(a) = e(t / p^K). Needs K >= -v_p(a).
u64 character_residue(const mpq_class& a, long p, int K);
// Smallest K for which character_residue(a, p, K) is exact.
int character_exponent(const mpq_class& a, long p);

// Psi(t / modulus).
struct AdditiveCharacterArg {
  u64 t = 0;
  u64 modulus = 1;
};

struct Magnitude {
  double value = 0.0;
  double error = 0.0;
};

// Element sum_t n_t e(t/M) of Z[zeta_M], kept with unreduced coefficients.
class CyclotomicValue {
 public:
  explicit CyclotomicValue(u64 modulus = 1);
  static CyclotomicValue prime_power(long p, int K);

  u64 modulus() const { return modulus_; }
  const std::map<u64, i64>& coefficients() const { return coeff_; }

  void accumulate(u64 t, i64 count = 1);
  void accumulate(const AdditiveCharacterArg& arg, i64 count = 1);

  CyclotomicValue lifted(u64 new_modulus) const;
  CyclotomicValue& operator+=(const CyclotomicValue& other);
  CyclotomicValue& operator-=(const CyclotomicValue& other);
  CyclotomicValue scaled(i64 factor) const;
  friend CyclotomicValue operator+(CyclotomicValue a, const CyclotomicValue& b) { return a += b; }
  friend CyclotomicValue operator-(CyclotomicValue a, const CyclotomicValue& b) { return a -= b; }

  // Canonical form in the power basis 1, zeta, ..., zeta^{phi(M)-1}.
  CyclotomicValue reduced() const;
  bool is_zero() const;
  bool exactly_equals(const CyclotomicValue& other) const;

  // Sum of all coefficients: the number of accumulated terms.
  i64 term_count() const;
  i64 abs_coefficient_sum() const;

  std::complex<double> complex_value() const;
  Magnitude magnitude() const;

  std::string str() const;

 private:
  u64 modulus_;
  std::map<u64, i64> coeff_;
};

}  // namespace kloost
