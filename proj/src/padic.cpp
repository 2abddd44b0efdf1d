#include "kloost/padic.hpp"

#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace kloost {

u64 ipow(u64 base, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (base != 0 && r > kMaxModulus / base) throw ArithmeticError("power exceeds 2^62");
    r *= base;
  }
  return r;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 reduce_mod(i64 x, u64 m) {
  i64 r = static_cast<i64>(static_cast<__int128>(x) % static_cast<__int128>(m));
  return r < 0 ? static_cast<u64>(r + static_cast<i64>(m)) : static_cast<u64>(r);
}

u64 reduce_mod(const mpz_class& x, u64 m) {
  mpz_class r;
  mpz_class mm;
  mpz_import(mm.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &m);
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), mm.get_mpz_t());
  u64 out = 0;
  mpz_export(&out, nullptr, 1, sizeof(u64), 0, 0, r.get_mpz_t());
  return out;
}

int valuation(const mpz_class& x, long p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  mpz_class y = x;
  int v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

int valuation(const mpq_class& x, long p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  return valuation(mpz_class(x.get_num()), p) - valuation(mpz_class(x.get_den()), p);
}

bool is_p_integral(const mpq_class& x, long p) {
  return x == 0 || !mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p));
}

PadicScalar PadicScalar::canonical(mpz_class numerator, int exponent, long p) {
  if (exponent < 0) {
    mpz_class f;
    mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(-exponent));
    numerator *= f;
    exponent = 0;
  }
  while (exponent > 0 &&
         (numerator == 0 || mpz_divisible_ui_p(numerator.get_mpz_t(), static_cast<unsigned long>(p)))) {
    if (numerator != 0)
      mpz_divexact_ui(numerator.get_mpz_t(), numerator.get_mpz_t(), static_cast<unsigned long>(p));
    --exponent;
  }
  return PadicScalar{std::move(numerator), exponent, p};
}

mpq_class PadicScalar::value() const {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(exponent));
  mpq_class q(numerator, den);
  q.canonicalize();
  return q;
}

int mu(const PadicScalar& a) { return mu(a.value(), a.p); }

int mu(const mpq_class& a, long p) {
  if (a == 0) return 0;
  int v = valuation(a, p);
  return v < 0 ? -v : 0;
}

namespace {

// Inverse of a modulo m for gcd(a, m) = 1, via extended Euclid.
u64 inverse_u64(u64 a, u64 m) {
  __int128 t = 0, nt = 1;
  __int128 r = m, nr = a % m;
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw ArithmeticError("not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

}  // namespace

u64 mod_inverse(i64 c, u64 modulus, long p) {
  if (c % p == 0) throw ArithmeticError("mod_inverse: p divides c");
  if (modulus == 1) return 0;
  return inverse_u64(reduce_mod(c, modulus), modulus);
}

u64 mod_inverse(const mpz_class& c, u64 modulus, long p) {
  if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)))
    throw ArithmeticError("mod_inverse: p divides c");
  if (modulus == 1) return 0;
  return inverse_u64(reduce_mod(c, modulus), modulus);
}

int character_exponent(const mpq_class& a, long p) {
  if (a == 0) return 0;
  int v = valuation(a, p);
  return v < 0 ? -v : 0;
}

u64 character_residue(const mpq_class& a, long p, int K) {
  int e = character_exponent(a, p);
  if (e > K) throw ArithmeticError("character_residue: K too small");
  if (e == 0) return 0;
  const u64 P = ipow(static_cast<u64>(p), static_cast<unsigned>(K));
  mpz_class den = a.get_den();
  mpz_class num = a.get_num();
  // den = p^e * s with s a unit; only s needs inverting.
  int vden = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(p));
    ++vden;
  }
  u64 s_inv = inverse_u64(reduce_mod(den, P), P);
  u64 shift = ipow(static_cast<u64>(p), static_cast<unsigned>(K - vden));
  return mulmod(mulmod(reduce_mod(num, P), s_inv, P), shift, P);
}

CyclotomicValue::CyclotomicValue(u64 modulus) : modulus_(modulus) {
  if (modulus == 0) throw ArithmeticError("cyclotomic modulus must be positive");
}

CyclotomicValue CyclotomicValue::prime_power(long p, int K) {
  return CyclotomicValue(ipow(static_cast<u64>(p), static_cast<unsigned>(K)));
}

void CyclotomicValue::accumulate(u64 t, i64 count) {
  if (count == 0) return;
  auto& c = coeff_[t % modulus_];
  c += count;
  if (c == 0) coeff_.erase(t % modulus_);
}

void CyclotomicValue::accumulate(const AdditiveCharacterArg& arg, i64 count) {
  if (arg.modulus == 0 || modulus_ % arg.modulus != 0)
    throw ArithmeticError("accumulate: argument modulus does not divide the value modulus");
  accumulate((arg.t % arg.modulus) * (modulus_ / arg.modulus), count);
}

CyclotomicValue CyclotomicValue::lifted(u64 new_modulus) const {
  if (new_modulus % modulus_ != 0) throw ArithmeticError("lift: modulus does not divide target");
  CyclotomicValue out(new_modulus);
  const u64 f = new_modulus / modulus_;
  for (auto [t, n] : coeff_) out.coeff_[t * f] = n;
  return out;
}

CyclotomicValue& CyclotomicValue::operator+=(const CyclotomicValue& other) {
  u64 l = std::lcm(modulus_, other.modulus_);
  if (l != modulus_) *this = lifted(l);
  const u64 f = l / other.modulus_;
  for (auto [t, n] : other.coeff_) accumulate(t * f, n);
  return *this;
}

CyclotomicValue& CyclotomicValue::operator-=(const CyclotomicValue& other) {
  return *this += other.scaled(-1);
}

CyclotomicValue CyclotomicValue::scaled(i64 factor) const {
  CyclotomicValue out(modulus_);
  if (factor == 0) return out;
  for (auto [t, n] : coeff_) out.coeff_[t] = n * factor;
  return out;
}

namespace {

using Poly = std::vector<i64>;  // dense, index = degree

Poly poly_divide_exact(const Poly& a, const Poly& b) {
  // b monic
  Poly r = a;
  const size_t db = b.size() - 1;
  Poly q(a.size() - db, 0);
  for (size_t k = a.size(); k-- > db;) {
    i64 c = r[k];
    if (c == 0) continue;
    q[k - db] = c;
    for (size_t j = 0; j <= db; ++j) r[k - db + j] -= c * b[j];
  }
  return q;
}

Poly cyclotomic_polynomial(u64 n) {
  // x^n - 1 divided by Phi_d for every proper divisor d.
  Poly num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (u64 d = 1; d < n; ++d) {
    if (n % d) continue;
    num = poly_divide_exact(num, cyclotomic_polynomial(d));
  }
  return num;
}

}  // namespace

CyclotomicValue CyclotomicValue::reduced() const {
  CyclotomicValue out(modulus_);
  if (coeff_.empty()) return out;
  // Prime-power fast path: zeta^{s + (p-1)p^{K-1}} = -sum_{j<p-1} zeta^{s + j p^{K-1}}.
  u64 p = 0;
  for (u64 d = 2; d <= modulus_; ++d)
    if (modulus_ % d == 0) {
      p = d;
      break;
    }
  u64 m = modulus_;
  while (p && m % p == 0) m /= p;
  if (modulus_ == 1) {
    out.coeff_[0] = term_count();
    if (out.coeff_[0] == 0) out.coeff_.clear();
    return out;
  }
  if (m == 1) {
    const u64 step = modulus_ / p;
    const u64 phi = modulus_ - step;
    std::map<u64, i64> c = coeff_;
    std::map<u64, i64> res;
    for (auto [t, n] : c) {
      if (t < phi) {
        res[t] += n;
      } else {
        u64 s = t - phi;
        for (u64 j = 0; j + 1 < p; ++j) res[s + j * step] -= n;
      }
    }
    for (auto [t, n] : res)
      if (n != 0) out.coeff_[t] = n;
    return out;
  }
  Poly phi = cyclotomic_polynomial(modulus_);
  const size_t deg = phi.size() - 1;
  Poly r(modulus_, 0);
  for (auto [t, n] : coeff_) r[t] += n;
  for (size_t k = modulus_; k-- > deg;) {
    i64 c = r[k];
    if (c == 0) continue;
    for (size_t j = 0; j <= deg; ++j) r[k - deg + j] -= c * phi[j];
  }
  for (size_t t = 0; t < deg; ++t)
    if (r[t] != 0) out.coeff_[t] = r[t];
  return out;
}

bool CyclotomicValue::is_zero() const { return reduced().coeff_.empty(); }

bool CyclotomicValue::exactly_equals(const CyclotomicValue& other) const {
  return (*this - other).is_zero();
}

i64 CyclotomicValue::term_count() const {
  i64 s = 0;
  for (auto [t, n] : coeff_) s += n;
  return s;
}

i64 CyclotomicValue::abs_coefficient_sum() const {
  i64 s = 0;
  for (auto [t, n] : coeff_) s += n < 0 ? -n : n;
  return s;
}

std::complex<double> CyclotomicValue::complex_value() const {
  // Kahan-compensated sums of the real and imaginary parts.
  double re = 0, im = 0, cre = 0, cim = 0;
  const double two_pi = 2.0 * M_PI;
  for (auto [t, n] : coeff_) {
    const double ang = two_pi * (static_cast<double>(t) / static_cast<double>(modulus_));
    const double x = static_cast<double>(n) * std::cos(ang) - cre;
    const double sr = re + x;
    cre = (sr - re) - x;
    re = sr;
    const double y = static_cast<double>(n) * std::sin(ang) - cim;
    const double si = im + y;
    cim = (si - im) - y;
    im = si;
  }
  return {re, im};
}

Magnitude CyclotomicValue::magnitude() const {
  const auto z = complex_value();
  // Each term carries a few ulps from the angle reduction and cos/sin.
  const double err = static_cast<double>(abs_coefficient_sum()) * 16.0 * DBL_EPSILON;
  return {std::abs(z), err};
}

std::string CyclotomicValue::str() const {
  std::ostringstream os;
  os << "{mod " << modulus_ << ":";
  for (auto [t, n] : coeff_) os << " " << t << ":" << n;
  os << "}";
  return os.str();
}

}  // namespace kloost
