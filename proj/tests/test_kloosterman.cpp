#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <numeric>
#include <set>

#include "kloost/kloosterman.hpp"
#include "test_util.hpp"

using namespace kloost;
using kloost::testing::compositions_up_to;
using kloost::testing::exponent_vectors;

namespace {

CyclotomicValue integer_value(i64 n) {
  CyclotomicValue v(1);
  v.accumulate(0, n);
  return v;
}

ModuliAssignment assignment(std::initializer_list<std::pair<Vertex, int>> xs) {
  ModuliAssignment a;
  for (const auto& [v, x] : xs) a.m[v] = x;
  return a;
}

u64 expected_count(long p, int ht, int kappa) {
  u64 c = ipow(static_cast<u64>(p), static_cast<unsigned>(ht - kappa));
  for (int i = 0; i < kappa; ++i) c *= static_cast<u64>(p - 1);
  return c;
}

std::complex<double> e(double x) { return std::polar(1.0, 2 * M_PI * x); }

}  // namespace

TEST(ModuliAssignments, Examples) {
  auto gl2 = moduli_assignments(make_admissible({1, 1}), {3});
  ASSERT_EQ(gl2.size(), 1u);
  EXPECT_EQ(gl2[0].at({1, 1}), 3);

  WeylElement w = make_admissible({1, 1, 1});
  auto ms = moduli_assignments(w, {1, 1});
  std::set<std::vector<int>> got;
  for (const auto& m : ms) got.insert({m.at({1, 1}), m.at({1, 2}), m.at({2, 2})});
  EXPECT_EQ(got, (std::set<std::vector<int>>{{1, 0, 1}, {0, 1, 0}}));

  for (auto blocks : std::vector<std::vector<int>>{{1, 1}, {2, 3}, {2, 2, 2}}) {
    WeylElement v = make_admissible(blocks);
    auto zero = moduli_assignments(v, std::vector<int>(static_cast<std::size_t>(v.rank()), 0));
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_EQ(zero[0].nonzero_count(), 0);
  }
}

TEST(ModuliAssignments, SolveConstraintsAndAreDistinct) {
  for (const auto& blocks : compositions_up_to(4)) {
    WeylElement w = make_admissible(blocks);
    for (const auto& r : exponent_vectors(w.rank(), 4)) {
      auto ms = moduli_assignments(w, r);
      std::set<std::string> seen;
      for (const auto& m : ms) {
        EXPECT_TRUE(is_valid_assignment(w, m, r));
        seen.insert(m.str());
      }
      EXPECT_EQ(seen.size(), ms.size());
    }
  }
}

TEST(CellModuli, Examples) {
  WeylElement gl2 = make_admissible({1, 1});
  EXPECT_EQ(cell_moduli(gl2, assignment({{{1, 1}, 4}})).at({1, 1}), 4);

  WeylElement w0 = make_admissible({2, 3});
  ModuliAssignment m = assignment({{{1, 2}, 1}, {{2, 2}, 2}, {{1, 3}, 3}, {{2, 3}, 1}, {{1, 4}, 2}, {{2, 4}, 5}});
  CellModuli C = cell_moduli(w0, m);
  EXPECT_EQ(C.at({1, 4}), 2);
  EXPECT_EQ(C.at({1, 2}), 1 + 3 + 2);
  for (const auto& [v, e] : C) EXPECT_GE(e, m.at(v));
}

TEST(RepresentativeSpace, Examples) {
  WeylElement gl2 = make_admissible({1, 1});
  std::vector<u64> seen;
  for_each_representative(gl2, assignment({{{1, 1}, 2}}), 3, [&](const std::vector<u64>& c) { seen.push_back(c[0]); });
  EXPECT_EQ(seen, (std::vector<u64>{1, 2, 4, 5, 7, 8}));

  WeylElement w = make_admissible({2, 2, 2});
  int n = 0;
  for_each_representative(w, ModuliAssignment{}, 5, [&](const std::vector<u64>& c) {
    ++n;
    for (u64 x : c) EXPECT_EQ(x, 0u);
  });
  EXPECT_EQ(n, 1);

  WeylElement l3 = make_admissible({1, 1, 1});
  ModuliAssignment m = assignment({{{1, 1}, 1}, {{1, 2}, 0}, {{2, 2}, 1}});
  CellModuli C = cell_moduli(l3, m);
  const u64 expect = (ipow(2, C.at({1, 1})) / 2) * ipow(2, C.at({1, 2})) * (ipow(2, C.at({2, 2})) / 2);
  u64 count = 0;
  for_each_representative(l3, m, 2, [&](const std::vector<u64>&) { ++count; });
  EXPECT_EQ(count, expect);
  EXPECT_EQ(representative_count(l3, m, 2), expect);
}

TEST(RepresentativeSpace, CountIdentity) {
  for (const auto& blocks : compositions_up_to(4)) {
    WeylElement w = make_admissible(blocks);
    for (long p : {2L, 3L})
      for (const auto& r : exponent_vectors(w.rank(), 4)) {
        int ht = 0;
        for (int x : r) ht += x;
        for (const auto& m : moduli_assignments(w, r)) {
          u64 streamed = 0;
          for_each_representative(w, m, p, [&](const std::vector<u64>&) { ++streamed; });
          EXPECT_EQ(streamed, expected_count(p, ht, m.nonzero_count())) << w.str() << " " << m.str();
        }
      }
  }
}

TEST(EvaluateSum, ReducesToClassicalSumOnGL2) {
  WeylElement w = make_admissible({1, 1});
  for (long p : {2L, 3L, 5L})
    for (int r = 0; r <= 3; ++r)
      for (i64 a : {0L, 1L, 2L, p, 2 * p})
        for (i64 b : {0L, 1L, 2L, p, 2 * p}) {
          SumResult s = evaluate_sum(w, {p, {r}}, {{a}, {b}});
          SumResult c = classical_kloosterman(a, b, ipow(static_cast<u64>(p), static_cast<unsigned>(r)));
          EXPECT_TRUE(s.value.exactly_equals(c.value)) << "p=" << p << " r=" << r << " " << a << "," << b;
          EXPECT_NEAR(std::abs(s.value.complex_value() - c.value.complex_value()), 0.0, 1e-6);
        }
}

TEST(EvaluateSum, Examples) {
  SumResult s = evaluate_sum(make_admissible({1, 1}), {3, {1}}, {{1}, {1}});
  EXPECT_TRUE(s.value.exactly_equals(integer_value(-1)));
  EXPECT_NEAR(s.magnitude.value, 1.0, 1e-12);

  for (auto blocks : std::vector<std::vector<int>>{{1, 1}, {1, 1, 1}, {2, 3}}) {
    WeylElement w = make_admissible(blocks);
    const int N = w.rank();
    SumResult one = evaluate_sum(w, {2, std::vector<int>(static_cast<std::size_t>(N), 0)},
                                 {std::vector<i64>(static_cast<std::size_t>(N), 1), std::vector<i64>(static_cast<std::size_t>(N), 1)});
    EXPECT_TRUE(one.value.exactly_equals(integer_value(1)));
    EXPECT_EQ(one.cell_count, 1u);
  }
}

TEST(EvaluateSum, RejectsSingleBlockAndBadInput) {
  EXPECT_THROW(evaluate_cell_sum(make_admissible({3}), {}, 2, CharacterPair::zero(2)), std::invalid_argument);
  EXPECT_THROW(evaluate_sum(make_admissible({1, 1}), {4, {1}}, {{1}, {1}}), std::invalid_argument);
  EXPECT_THROW(evaluate_sum(make_admissible({1, 1}), {2, {1}}, {{1, 1}, {1}}), std::invalid_argument);
}

TEST(EvaluateSum, BudgetIsEnforced) {
  EvalOptions opt;
  opt.budget = 10;
  EXPECT_THROW(evaluate_sum(make_admissible({1, 1, 1}), {2, {3, 3}}, CharacterPair::zero(2), opt), BudgetExceeded);
  opt.budget = 1000;
  EXPECT_NO_THROW(evaluate_sum(make_admissible({1, 1, 1}), {2, {3, 3}}, CharacterPair::zero(2), opt));
}

TEST(EvaluateSum, DegenerateCharacterCountsCells) {
  for (auto blocks : std::vector<std::vector<int>>{{1, 1, 1}, {1, 2}, {2, 2}, {1, 1, 2}}) {
    WeylElement w = make_admissible(blocks);
    for (const auto& r : exponent_vectors(w.rank(), 3)) {
      SumResult s = evaluate_sum(w, {3, r}, CharacterPair::zero(w.rank()));
      EXPECT_TRUE(s.value.exactly_equals(integer_value(static_cast<i64>(s.cell_count))));
    }
  }
}

TEST(EvaluateSum, TriangleInequality) {
  for (auto blocks : std::vector<std::vector<int>>{{1, 1, 1}, {2, 1}, {1, 3}, {2, 2}}) {
    WeylElement w = make_admissible(blocks);
    CharacterPair ch{std::vector<i64>(static_cast<std::size_t>(w.rank()), 1), std::vector<i64>(static_cast<std::size_t>(w.rank()), 3)};
    for (const auto& r : exponent_vectors(w.rank(), 4)) {
      SumResult s = evaluate_sum(w, {2, r}, ch);
      EXPECT_LE(s.magnitude.value, static_cast<double>(s.cell_count) + s.magnitude.error);
    }
  }
}

TEST(EvaluateSum, ThreadCountDoesNotChangeResult) {
  WeylElement w = make_admissible({1, 1, 1});
  CharacterPair ch{{1, 2}, {3, 1}};
  EvalOptions one, four;
  one.threads = 1;
  four.threads = 4;
  for (const auto& r : std::vector<std::vector<int>>{{2, 3}, {3, 3}, {4, 2}}) {
    SumResult a = evaluate_sum(w, {3, r}, ch, one);
    SumResult b = evaluate_sum(w, {3, r}, ch, four);
    EXPECT_EQ(a.value.coefficients(), b.value.coefficients());
  }
}

TEST(PhaseRoutes, AgreePerCell) {
  std::mt19937_64 rng(31);
  for (auto blocks : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {2, 3}, {1, 1, 1}, {2, 1, 2}, {1, 2, 1}, {1, 1, 1, 1}}) {
    WeylElement w = make_admissible(blocks);
    const std::size_t N = static_cast<std::size_t>(w.rank());
    for (long p : {2L, 3L})
      for (int t = 0; t < 20; ++t) {
        CellCoordinates cell = sample_cell(w, p, 3, rng);
        CharacterPair ch{std::vector<i64>(N), std::vector<i64>(N)};
        for (std::size_t i = 0; i < N; ++i) {
          ch.psi[i] = static_cast<i64>(rng() % 11) - 5;
          ch.psi_prime[i] = static_cast<i64>(rng() % 11) - 5;
        }
        const mpq_class edge = edge_formula_argument(w, cell, ch);
        EXPECT_EQ(edge, closed_form_argument(w, cell, ch)) << w.str();
        EXPECT_EQ(edge, factorization_argument(w, cell, ch)) << w.str();
      }
  }
}

TEST(PhaseRoutes, AgreeAtSumLevel) {
  for (auto blocks : std::vector<std::vector<int>>{{1, 1, 1}, {1, 2}, {2, 2}, {2, 1, 1}}) {
    WeylElement w = make_admissible(blocks);
    const std::size_t N = static_cast<std::size_t>(w.rank());
    CharacterPair ch{std::vector<i64>(N), std::vector<i64>(N)};
    for (std::size_t i = 0; i < N; ++i) {
      ch.psi[i] = static_cast<i64>(i) + 1;
      ch.psi_prime[i] = 2 * static_cast<i64>(i) + 3;
    }
    for (const auto& r : exponent_vectors(w.rank(), 3)) {
      const SumResult base = evaluate_sum(w, {2, r}, ch);
      for (InverseConvention inv : {InverseConvention::cell_modulus, InverseConvention::exact})
        for (SumRoute route : {SumRoute::edge_formula, SumRoute::closed_form, SumRoute::factorization}) {
          if (route == SumRoute::factorization && inv == InverseConvention::cell_modulus) continue;
          EvalOptions opt;
          opt.inverse = inv;
          opt.route = route;
          EXPECT_TRUE(evaluate_sum(w, {2, r}, ch, opt).value.exactly_equals(base.value)) << w.str();
        }
    }
  }
}

TEST(ClassicalKloosterman, Examples) {
  EXPECT_TRUE(classical_kloosterman(1, 1, 2).value.exactly_equals(integer_value(1)));
  EXPECT_TRUE(classical_kloosterman(1, 1, 3).value.exactly_equals(integer_value(-1)));
  std::complex<double> direct = e(2.0 / 3) + e(4.0 / 3);
  EXPECT_NEAR(std::abs(classical_kloosterman(1, 1, 3).value.complex_value() - direct), 0.0, 1e-12);
  for (u64 c : {1u, 7u, 12u, 25u}) {
    i64 phi = 0;
    for (u64 x = 0; x < c; ++x) phi += std::gcd(x, c) == 1;
    EXPECT_TRUE(classical_kloosterman(0, 0, c).value.exactly_equals(integer_value(phi)));
  }
}

TEST(ClassicalKloosterman, SymmetricInArguments) {
  for (u64 c : {8u, 9u, 15u, 16u})
    for (i64 a = -3; a <= 5; ++a)
      for (i64 b = -2; b <= 4; ++b)
        EXPECT_TRUE(classical_kloosterman(a, b, c).value.exactly_equals(classical_kloosterman(b, a, c).value));
}

TEST(HyperKloosterman, Examples) {
  SumResult k1 = hyper_kloosterman(5, 1, 3, 2);
  EXPECT_NEAR(k1.magnitude.value, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(k1.value.complex_value() - e(5.0 / 9)), 0.0, 1e-12);
  EXPECT_TRUE(hyper_kloosterman(1, 2, 3, 1).value.exactly_equals(integer_value(-1)));
  EXPECT_TRUE(hyper_kloosterman(1, 3, 2, 1).value.exactly_equals(integer_value(-1)));
  EXPECT_THROW(hyper_kloosterman(6, 2, 3, 1), ArithmeticError);
  for (long p : {2L, 3L, 5L})
    for (int r = 1; r <= 3; ++r)
      EXPECT_TRUE(hyper_kloosterman(7, 2, p, r).value.exactly_equals(classical_kloosterman(1, 7, ipow(static_cast<u64>(p), static_cast<unsigned>(r))).value));
}

TEST(HyperKloosterman, IdentifiesBlocksOneN) {
  // Blocks (1, N) with r_j = (N+1-j) m equal p^{m N(N-1)/2} Kl_{N+1}(psi_1...psi_N psi'_N; p^m).
  for (int N : {2, 3})
    for (long p : {2L, 3L})
      for (int m : {1, 2}) {
        if (N == 3 && p == 3 && m == 2) continue;
        WeylElement w = make_admissible({1, N});
        std::vector<int> r(static_cast<std::size_t>(N));
        for (int j = 1; j <= N; ++j) r[static_cast<std::size_t>(j - 1)] = (N + 1 - j) * m;
        CharacterPair ch{std::vector<i64>(static_cast<std::size_t>(N), 1), std::vector<i64>(static_cast<std::size_t>(N), 0)};
        ch.psi[1] = p == 2 ? 3 : 2;
        ch.psi_prime.back() = p == 2 ? 5 : 4;
        i64 a = ch.psi_prime.back();
        for (i64 x : ch.psi) a *= x;
        SumResult s = evaluate_sum(w, {p, r}, ch);
        SumResult h = hyper_kloosterman(a, N + 1, p, m);
        const i64 f = static_cast<i64>(ipow(static_cast<u64>(p), static_cast<unsigned>(m * N * (N - 1) / 2)));
        EXPECT_TRUE(h.value.scaled(f).exactly_equals(s.value)) << "N=" << N << " p=" << p << " m=" << m;
      }
}

TEST(ScalingIdentity, GL2MatchesClassicalScaling) {
  WeylElement w = make_admissible({1, 1});
  for (long p : {2L, 3L, 5L})
    for (int m = 1; m <= 3; ++m)
      for (i64 a : {1L, 2L, 7L})
        for (i64 b : {1L, 3L}) {
          EXPECT_TRUE(scaling_identity_check(w, assignment({{{1, 1}, m}}), p, {{a}, {b}}, 1));
          const u64 c = ipow(static_cast<u64>(p), static_cast<unsigned>(m));
          EXPECT_TRUE(classical_kloosterman(a, b, c).value.scaled(p).exactly_equals(classical_kloosterman(p * a, p * b, c * static_cast<u64>(p)).value));
        }
}

TEST(ScalingIdentity, LongElementGL3) {
  WeylElement w = make_admissible({1, 1, 1});
  ModuliAssignment ones = assignment({{{1, 1}, 1}, {{1, 2}, 1}, {{2, 2}, 1}});
  EXPECT_TRUE(scaling_identity_check(w, ones, 2, {{1, 1}, {1, 1}}, 1));
  EXPECT_TRUE(scaling_identity_check(w, ones, 3, {{1, 1}, {1, 1}}, 2));
  for (long p : {2L, 3L})
    for (const auto& r : exponent_vectors(2, 5))
      for (const auto& m : moduli_assignments(w, r)) {
        if (m.nonzero_count() < 3) continue;
        for (int k = 1; k <= 2; ++k) EXPECT_TRUE(scaling_identity_check(w, m, p, {{1, 2}, {3, 2}}, k)) << m.str();
      }
  // The pairing with psi_k instead of psi_{N+1-k} does not hold here.
  EXPECT_FALSE(scaling_identity_check(w, ones, 2, {{1, 2}, {3, 2}}, 1, {}, ScalingPairing::printed));
}

TEST(ScalingIdentity, Preconditions) {
  WeylElement w = make_admissible({1, 1, 1});
  EXPECT_THROW(scaling_identity_check(w, assignment({{{1, 1}, 1}, {{1, 2}, 0}, {{2, 2}, 1}}), 2, {{1, 1}, {1, 1}}, 1),
               std::invalid_argument);
  EXPECT_THROW(scaling_identity_check(make_admissible({1, 2}), {}, 2, {{1, 1}, {1, 1}}, 1), std::invalid_argument);
  EXPECT_THROW(scaling_identity_check(w, assignment({{{1, 1}, 1}, {{1, 2}, 1}, {{2, 2}, 1}}), 2, {{1, 1}, {1, 1}}, 3),
               std::invalid_argument);
}

TEST(Gamma0, LevelZeroIsFullSum) {
  WeylElement w = make_admissible({1, 2});
  CharacterPair ch{{1, 3}, {2, 1}};
  for (const auto& r : exponent_vectors(2, 3))
    EXPECT_TRUE(evaluate_sum_gamma0(w, {2, r}, ch, 0).value.exactly_equals(evaluate_sum(w, {2, r}, ch).value));
}

TEST(Gamma0, GL2) {
  WeylElement w = make_admissible({1, 1});
  for (long p : {2L, 3L}) {
    SumResult zero = evaluate_sum_gamma0(w, {p, {0}}, {{1}, {1}}, 1);
    EXPECT_TRUE(zero.value.is_zero());
    EXPECT_EQ(zero.cell_count, 0u);
    EXPECT_TRUE(evaluate_sum_gamma0(w, {p, {1}}, {{1}, {2}}, 1).value.exactly_equals(evaluate_sum(w, {p, {1}}, {{1}, {2}}).value));
  }
  EXPECT_THROW(evaluate_sum_gamma0(w, {2, {1}}, {{1}, {1}}, -1), std::invalid_argument);
}

TEST(Gamma0, TransformData) {
  Gamma0Transform g = gamma0_transform(make_admissible({1, 2}), {2, {1, 3}}, {{1, 2}, {5, 7}});
  EXPECT_EQ(g.w.blocks(), (std::vector<int>{2, 1}));
  EXPECT_EQ(g.r, (std::vector<int>{3, 1}));
  EXPECT_EQ(g.chars.psi_prime, (std::vector<i64>{-7, -5}));
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(std::abs(g.chars.psi[i]), (std::vector<i64>{2, 1})[i]);
  EXPECT_EQ(g.restricted_vertex, *g.w.s1_vertex());
}
