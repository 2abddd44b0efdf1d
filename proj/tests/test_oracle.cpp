#include <gtest/gtest.h>

#include "kloost/bounds.hpp"
#include "kloost/oracle.hpp"
#include "test_util.hpp"

using namespace kloost;
using kloost::testing::exponent_vectors;

namespace {

CyclotomicValue integer_value(i64 n) {
  CyclotomicValue v(1);
  v.accumulate(0, n);
  return v;
}

std::vector<i64> ramp(int N, i64 a, i64 b) {
  std::vector<i64> v(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) v[static_cast<std::size_t>(i)] = a * i + b;
  return v;
}

}  // namespace

TEST(KloostermanSet, Examples) {
  EXPECT_EQ(enumerate_kloosterman_set(make_admissible({1, 1}), {2, {1}}).size(), 1u);
  auto trivial = enumerate_kloosterman_set(make_admissible({1, 1, 1}), {3, {0, 0}});
  ASSERT_EQ(trivial.size(), 1u);
  EXPECT_EQ(trivial[0].u, RationalMatrix::identity(3));
  EXPECT_EQ(trivial[0].u_prime, RationalMatrix::identity(3));
  EXPECT_EQ(enumerate_kloosterman_set(make_admissible({1, 1, 1}), {2, {1, 1}}).size(), 3u);
}

TEST(KloostermanSet, CosetsAreValid) {
  for (auto blocks : std::vector<std::vector<int>>{{1, 1}, {1, 1, 1}, {1, 2}, {2, 1}}) {
    WeylElement w = make_admissible(blocks);
    for (long p : {2L, 3L})
      for (const auto& r : exponent_vectors(w.rank(), 3)) {
        Modulus mod{p, r};
        const RationalMatrix n = mod.fc() * w.signed_matrix();
        for (const CosetPair& cp : enumerate_kloosterman_set(w, mod)) {
          EXPECT_TRUE(cp.u.is_upper_unipotent());
          EXPECT_TRUE(cp.u_prime.is_upper_unipotent());
          RationalMatrix g = cp.u * n * cp.u_prime;
          EXPECT_TRUE(g.is_p_integral(p));
          EXPECT_EQ(valuation(g.determinant(), p), 0);
          for (std::size_t a = 0; a < cp.u_prime.size(); ++a)
            for (std::size_t b = a + 1; b < cp.u_prime.size(); ++b) {
              EXPECT_GE(cp.u_prime(a, b), 0);
              EXPECT_LT(cp.u_prime(a, b), 1);
            }
        }
      }
  }
}

TEST(KloostermanSet, SizeIsTrivialBound) {
  for (auto blocks : std::vector<std::vector<int>>{{1, 1}, {2}, {3}, {1, 1, 1}, {1, 2}, {2, 1}}) {
    WeylElement w = make_admissible(blocks);
    for (long p : {2L, 3L})
      for (const auto& r : exponent_vectors(w.rank(), p == 2 ? 4 : 3))
        EXPECT_EQ(mpz_class(static_cast<unsigned long>(enumerate_kloosterman_set(w, {p, r}).size())), trivial_bound(w, r, p))
            << w.str();
  }
}

TEST(KloostermanSet, DenominatorBoundIsStable) {
  EXPECT_TRUE(oracle_bound_stable(make_admissible({1, 1}), {3, {2}}));
  EXPECT_TRUE(oracle_bound_stable(make_admissible({1, 1, 1}), {2, {1, 1}}));
  EXPECT_TRUE(oracle_bound_stable(make_admissible({1, 2}), {2, {2, 1}}));
  EXPECT_TRUE(oracle_bound_stable(make_admissible({2, 1}), {3, {1, 1}}));
  OracleOptions small;
  small.denominator_bound = 1;
  EXPECT_THROW(enumerate_kloosterman_set(make_admissible({1, 1}), {2, {2}}, small), std::invalid_argument);
}

TEST(KloostermanSet, BudgetIsEnforced) {
  OracleOptions opt;
  opt.budget = 20;
  EXPECT_THROW(enumerate_kloosterman_set(make_admissible({1, 1, 1}), {3, {2, 2}}, opt), BudgetExceeded);
}

TEST(OracleSum, Examples) {
  EXPECT_TRUE(oracle_sum(make_admissible({1, 1}), {3, {1}}, {{1}, {1}}).value.exactly_equals(integer_value(-1)));
  SumResult zero = oracle_sum(make_admissible({1, 2}), {2, {2, 1}}, CharacterPair::zero(2));
  EXPECT_TRUE(zero.value.exactly_equals(integer_value(static_cast<i64>(zero.cell_count))));
  WeylElement w = make_admissible({1, 2});
  EXPECT_TRUE(oracle_sum(w, {2, {1, 1}}, {{1, 1}, {1, 1}}).value.exactly_equals(evaluate_sum(w, {2, {1, 1}}, {{1, 1}, {1, 1}}).value));
  WeylElement l3 = make_admissible({1, 1, 1});
  EXPECT_TRUE(oracle_sum(l3, {2, {1, 1}}, {{1, 1}, {1, 1}}).value.exactly_equals(evaluate_sum(l3, {2, {1, 1}}, {{1, 1}, {1, 1}}).value));
}

TEST(OracleSum, MatchesEvaluator) {
  for (auto blocks : std::vector<std::vector<int>>{{1, 1}, {1, 1, 1}, {1, 2}, {2, 1}}) {
    WeylElement w = make_admissible(blocks);
    const int N = w.rank();
    for (long p : {2L, 3L}) {
      const std::vector<CharacterPair> chars{{ramp(N, 0, 1), ramp(N, 0, 1)},
                                             {ramp(N, 1, 1), ramp(N, 2, 1)},
                                             {ramp(N, 0, p), ramp(N, 1, 1)},
                                             {ramp(N, 1, 1), ramp(N, 0, 0)}};
      for (const auto& r : exponent_vectors(N, 3))
        for (const auto& ch : chars) {
          SumResult o = oracle_sum(w, {p, r}, ch);
          SumResult s = evaluate_sum(w, {p, r}, ch);
          EXPECT_EQ(o.cell_count, s.cell_count);
          EXPECT_TRUE(o.value.exactly_equals(s.value)) << w.str() << " p=" << p;
        }
    }
  }
}

TEST(OracleSum, Gamma0MatchesTransformedEvaluator) {
  for (auto blocks : std::vector<std::vector<int>>{{1, 1}, {1, 1, 1}, {1, 2}, {2, 1}}) {
    WeylElement w = make_admissible(blocks);
    const int N = w.rank();
    for (long p : {2L, 3L})
      for (int level : {1, 2})
        for (const auto& r : exponent_vectors(N, 3)) {
          CharacterPair ch{ramp(N, 1, 1), ramp(N, 2, 1)};
          OracleOptions opt;
          opt.gamma0_level = level;
          SumResult o = oracle_sum(w, {p, r}, ch, opt);
          SumResult s = evaluate_sum_gamma0(w, {p, r}, ch, level);
          EXPECT_EQ(o.cell_count, s.cell_count) << w.str();
          EXPECT_TRUE(o.value.exactly_equals(s.value)) << w.str() << " p=" << p << " l=" << level;
        }
  }
}

TEST(InversionIdentity, Holds) {
  WeylElement gl2 = make_admissible({1, 1});
  for (int r = 0; r <= 3; ++r) {
    InversionCheck ic = inversion_identity_check(gl2, {2, {r}}, {{1}, {3}});
    EXPECT_TRUE(ic.holds);
    const u64 c = ipow(2, static_cast<unsigned>(r));
    EXPECT_TRUE(ic.lhs.value.exactly_equals(classical_kloosterman(3, 1, c).value));
  }
  for (auto blocks : std::vector<std::vector<int>>{{1, 1, 1}, {1, 2}, {2, 1}})
    for (const auto& r : exponent_vectors(2, 3)) {
      InversionCheck ic = inversion_identity_check(make_admissible(blocks), {2, r}, {{1, 3}, {5, 1}});
      EXPECT_TRUE(ic.holds) << blocks.size();
      if (r == std::vector<int>{0, 0}) {
        EXPECT_TRUE(ic.lhs.value.exactly_equals(integer_value(1)));
        EXPECT_TRUE(ic.rhs.value.exactly_equals(integer_value(1)));
      }
    }
}
