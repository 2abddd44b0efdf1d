#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "kloost/weyl.hpp"

using namespace kloost;

namespace {

// All compositions of n into positive parts.
void compositions(int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = 1; k <= n; ++k) {
    cur.push_back(k);
    compositions(n - k, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> compositions_up_to(int max_size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  for (int n = 1; n <= max_size; ++n) compositions(n, cur, out);
  return out;
}

RationalMatrix from_rows(const std::vector<std::vector<int>>& rows) {
  RationalMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

TEST(MakeAdmissible, SmallestElement) {
  WeylElement w = make_admissible({1, 1});
  EXPECT_EQ(w.permutation_matrix(), from_rows({{0, 1}, {1, 0}}));
}

TEST(MakeAdmissible, TwoThreeBlocks) {
  WeylElement w = make_admissible({2, 3});
  EXPECT_EQ(w.permutation_matrix(), from_rows({{0, 0, 0, 1, 0},
                                               {0, 0, 0, 0, 1},
                                               {1, 0, 0, 0, 0},
                                               {0, 1, 0, 0, 0},
                                               {0, 0, 1, 0, 0}}));
}

TEST(MakeAdmissible, ThreeEqualBlocks) {
  WeylElement w = make_admissible({2, 2, 2});
  EXPECT_EQ(w.permutation_matrix(), from_rows({{0, 0, 0, 0, 1, 0},
                                               {0, 0, 0, 0, 0, 1},
                                               {0, 0, 1, 0, 0, 0},
                                               {0, 0, 0, 1, 0, 0},
                                               {1, 0, 0, 0, 0, 0},
                                               {0, 1, 0, 0, 0, 0}}));
}

TEST(MakeAdmissible, Rejects) {
  EXPECT_THROW(make_admissible({}), InvalidWeylElement);
  EXPECT_THROW(make_admissible({2, 0, 1}), InvalidWeylElement);
  EXPECT_NO_THROW(make_admissible({3}));
}

TEST(Length, Examples) {
  EXPECT_EQ(length(make_admissible({1, 1})), 1);
  EXPECT_EQ(length(make_admissible({2, 3})), 6);
  EXPECT_EQ(length(make_admissible({2, 2, 2})), 12);
  EXPECT_EQ(length(make_admissible({4})), 0);
}

TEST(ReducedExpression, Examples) {
  EXPECT_EQ(reduced_expression(make_admissible({1, 1})), std::vector<int>{1});
  EXPECT_EQ(reduced_expression(make_admissible({2, 3, 1})),
            (std::vector<int>{5, 4, 3, 2, 3, 4, 5, 1, 2, 3, 4}));
  WeylElement w0 = make_admissible({2, 3});
  EXPECT_EQ(reduced_expression(w0).size(), 6u);
}

TEST(SignedMatrix, SmallExamples) {
  EXPECT_EQ(make_admissible({1, 1, 1}).signed_matrix(), from_rows({{0, 0, 1}, {0, -1, 0}, {1, 0, 0}}));
  EXPECT_EQ(make_admissible({1, 2}).signed_matrix(), from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
  EXPECT_EQ(make_admissible({2, 1}).signed_matrix(), from_rows({{0, -1, 0}, {0, 0, -1}, {1, 0, 0}}));
}

TEST(WeylProperties, AllCompositionsUpToSix) {
  for (const auto& blocks : compositions_up_to(6)) {
    WeylElement w = make_admissible(blocks);
    const int size = w.size();
    SCOPED_TRACE(w.str());

    // Product of s_i over the word: signed representative, determinant one, |.| = permutation.
    RationalMatrix prod = RationalMatrix::identity(static_cast<std::size_t>(size));
    for (int i : w.word()) prod = prod * simple_reflection(i, size);
    EXPECT_EQ(prod, w.signed_matrix());
    EXPECT_EQ(prod.determinant(), 1);
    RationalMatrix absval(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) absval(i, j) = abs(prod(i, j));
    EXPECT_EQ(absval, w.permutation_matrix());

    // |I_w| = l(w) = sum_{a<b} k_a k_b, from the I_l definition directly.
    std::set<Vertex> expected;
    int levels_total = 0;
    for (int l = 1; l < w.block_count(); ++l)
      for (int i = 1; i <= w.kappa(l); ++i)
        for (int j = w.kappa(l); j <= w.kappa(l + 1) - 1; ++j) {
          expected.insert({i, j});
          ++levels_total;
        }
    IndexSet I = index_set(w);
    EXPECT_EQ(static_cast<int>(I.size()), length(w));
    EXPECT_EQ(static_cast<int>(expected.size()), levels_total);  // levels disjoint
    EXPECT_EQ(std::set<Vertex>(I.ordered.begin(), I.ordered.end()), expected);
    EXPECT_EQ(w.length(), length(w));

    // I_w is the inversion set R(w^{-1}): alpha_{i,j} with sigma(i) > sigma(j+1).
    std::set<Vertex> inversions;
    const auto& sigma = w.permutation();
    for (int i = 1; i <= size - 1; ++i)
      for (int j = i; j <= size - 1; ++j)
        if (sigma[static_cast<std::size_t>(i - 1)] > sigma[static_cast<std::size_t>(j)]) inversions.insert({i, j});
    EXPECT_EQ(inversions, expected);

    if (w.block_count() >= 2) {
      EXPECT_EQ(std::count(w.word().begin(), w.word().end(), 1), 1);
      EXPECT_TRUE(w.s1_vertex().has_value());
    }

    int steps = 0;
    WeylElement cur = w;
    while (cur.block_count() >= 3) {
      cur = factor_top_blocks(cur).merged;
      ++steps;
    }
    EXPECT_EQ(steps, std::max(0, w.block_count() - 2));
  }
}

TEST(IndexSet, TwoThree) {
  IndexSet I = index_set(make_admissible({2, 3}));
  ASSERT_EQ(I.levels.size(), 1u);
  std::set<Vertex> got(I.levels[0].begin(), I.levels[0].end());
  std::set<Vertex> want{{1, 2}, {2, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}};
  EXPECT_EQ(got, want);
  EXPECT_TRUE(index_set(make_admissible({5})).ordered.empty());
}

TEST(IndexSet, SmallestAndThreeBlocks) {
  EXPECT_EQ(index_set(make_admissible({1, 1})).ordered, (std::vector<Vertex>{Vertex{1, 1}}));
  IndexSet I = index_set(make_admissible({2, 2, 2}));
  EXPECT_EQ(I.size(), 12u);
  for (const Vertex& v : I.ordered) {
    bool top = v.i <= 2 && v.j >= 2 && v.j <= 3;
    bool bottom = v.i <= 4 && v.j >= 4 && v.j <= 5;
    EXPECT_TRUE(top || bottom) << v.str();
  }
}

TEST(FactorTopBlocks, Examples) {
  auto f = factor_top_blocks(make_admissible({2, 2, 2}));
  EXPECT_EQ(f.merged.blocks(), (std::vector<int>{4, 2}));
  EXPECT_EQ(f.k, 2);
  EXPECT_EQ(f.n_plus_1, 4);
  EXPECT_EQ(f.f, 2);

  auto g = factor_top_blocks(make_admissible({1, 1, 1}));
  EXPECT_EQ(g.merged.blocks(), (std::vector<int>{2, 1}));
  EXPECT_EQ(g.k, 1);
  EXPECT_EQ(g.n_plus_1, 2);
  EXPECT_EQ(g.f, 1);

  auto h = factor_top_blocks(make_admissible({2, 3, 1}));
  EXPECT_EQ(h.merged.blocks(), (std::vector<int>{5, 1}));
  EXPECT_EQ(h.k, 2);
  EXPECT_EQ(h.n_plus_1, 5);
  EXPECT_EQ(h.f, 1);

  EXPECT_THROW(factor_top_blocks(make_admissible({2, 3})), InvalidWeylElement);
}
