#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace kloost {

// Dense square matrix of exact rationals, 0-based indices.
class RationalMatrix {
 public:
  explicit RationalMatrix(std::size_t n = 0) : n_(n), a_(n * n) {}
  static RationalMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  mpq_class& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  RationalMatrix operator*(const RationalMatrix& b) const;
  bool operator==(const RationalMatrix& b) const;
  bool operator!=(const RationalMatrix& b) const { return !(*this == b); }

  RationalMatrix transpose() const;
  RationalMatrix inverse() const;  // throws std::domain_error if singular
  mpq_class determinant() const;

  // (J A J)^T with J the antidiagonal permutation.
  RationalMatrix antitranspose() const;

  bool is_upper_unipotent() const;
  bool is_p_integral(long p) const;
  bool is_monomial() const;
  // Column of the nonzero entry in each row of a monomial matrix.
  std::vector<int> monomial_pattern() const;

  std::string str() const;

 private:
  std::size_t n_;
  std::vector<mpq_class> a_;
};

}  // namespace kloost
