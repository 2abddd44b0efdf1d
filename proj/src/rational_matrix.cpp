#include "kloost/rational_matrix.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace kloost {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& b) const {
  if (n_ != b.n_) throw std::invalid_argument("matrix size mismatch");
  RationalMatrix c(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const mpq_class& x = (*this)(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (b(k, j) != 0) c(i, j) += x * b(k, j);
    }
  return c;
}

bool RationalMatrix::operator==(const RationalMatrix& b) const {
  return n_ == b.n_ && a_ == b.a_;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::antitranspose() const {
  RationalMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(n_ - 1 - j, n_ - 1 - i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::inverse() const {
  RationalMatrix a = *this;
  RationalMatrix inv = identity(n_);
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t piv = c;
    while (piv < n_ && a(piv, c) == 0) ++piv;
    if (piv == n_) throw std::domain_error("singular matrix");
    if (piv != c)
      for (std::size_t j = 0; j < n_; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    const mpq_class pv = a(c, c);
    for (std::size_t j = 0; j < n_; ++j) {
      a(c, j) /= pv;
      inv(c, j) /= pv;
    }
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == c || a(r, c) == 0) continue;
      const mpq_class f = a(r, c);
      for (std::size_t j = 0; j < n_; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

mpq_class RationalMatrix::determinant() const {
  RationalMatrix a = *this;
  mpq_class det = 1;
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t piv = c;
    while (piv < n_ && a(piv, c) == 0) ++piv;
    if (piv == n_) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n_; ++r) {
      if (a(r, c) == 0) continue;
      const mpq_class f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n_; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

bool RationalMatrix::is_upper_unipotent() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool RationalMatrix::is_p_integral(long p) const {
  for (const auto& x : a_)
    if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p))) return false;
  return true;
}

bool RationalMatrix::is_monomial() const {
  try {
    monomial_pattern();
  } catch (const std::domain_error&) {
    return false;
  }
  return true;
}

std::vector<int> RationalMatrix::monomial_pattern() const {
  std::vector<int> col(n_, -1);
  std::vector<bool> used(n_, false);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if ((*this)(i, j) == 0) continue;
      if (col[i] != -1 || used[j]) throw std::domain_error("not a monomial matrix");
      col[i] = static_cast<int>(j);
      used[j] = true;
    }
    if (col[i] == -1) throw std::domain_error("not a monomial matrix");
  }
  return col;
}

std::string RationalMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < n_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < n_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
  }
  os << "]";
  return os.str();
}

}  // namespace kloost
