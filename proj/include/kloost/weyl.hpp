#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kloost/rational_matrix.hpp"

namespace kloost {

// Position (i, j) of I_w, 1-based; it stands for the root alpha_{i,j} = alpha_i + ... + alpha_j.
struct Vertex {
  int i = 0;
  int j = 0;
  auto operator<=>(const Vertex&) const = default;
  std::string str() const { return std::to_string(i) + "," + std::to_string(j); }
};

class InvalidWeylElement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BlockComposition {
  std::vector<int> blocks;

  int dimension() const;  // N + 1
  int rank() const { return dimension() - 1; }
  int count() const { return static_cast<int>(blocks.size()); }
  // kappa_l = k_1 + ... + k_l, kappa_0 = 0.
  int kappa(int l) const;
};

// s_i as phi_{alpha_i}((0,-1),(1,0)) in GL_size.
RationalMatrix simple_reflection(int i, int size);

// Block anti-diagonal Weyl element with its fixed reduced expression and signed representative.
class WeylElement {
 public:
  const BlockComposition& composition() const { return comp_; }
  const std::vector<int>& blocks() const { return comp_.blocks; }
  int size() const { return comp_.dimension(); }
  int rank() const { return comp_.rank(); }
  int block_count() const { return comp_.count(); }
  int kappa(int l) const { return comp_.kappa(l); }

  // sigma(i): column of the 1 in row i (0-based).
  const std::vector<int>& permutation() const { return sigma_; }
  RationalMatrix permutation_matrix() const;
  const RationalMatrix& signed_matrix() const { return signed_; }

  // Simple reflection indices s_{i_1} ... s_{i_l}, left to right.
  const std::vector<int>& word() const { return word_; }
  // gamma_t = s_{i_1}...s_{i_{t-1}}(alpha_{i_t}) as a vertex (a, b) of I_w.
  const std::vector<Vertex>& gamma_labels() const { return gammas_; }
  int length() const { return static_cast<int>(word_.size()); }

  // Vertex carrying the unique s_1 letter; empty for the identity.
  std::optional<Vertex> s1_vertex() const;
  bool is_long_element() const;

  std::string str() const;

 private:
  friend WeylElement make_admissible(std::vector<int> blocks);
  BlockComposition comp_;
  std::vector<int> sigma_;
  std::vector<int> word_;
  std::vector<Vertex> gammas_;
  RationalMatrix signed_;
};

WeylElement make_admissible(std::vector<int> blocks);
int length(const WeylElement& w);
std::vector<int> reduced_expression(const WeylElement& w);

struct IndexSet {
  std::vector<std::vector<Vertex>> levels;  // levels[l-1] = I_l, in gamma order
  std::vector<Vertex> ordered;              // I_w in gamma order

  std::size_t size() const { return ordered.size(); }
  bool contains(const Vertex& v) const;
  int position(const Vertex& v) const;  // index in `ordered`, -1 if absent
  int level_of(const Vertex& v) const;  // l with v in I_l, 0 if absent
};

IndexSet index_set(const WeylElement& w);

struct TopBlockFactorization {
  WeylElement merged;  // w' with the top two blocks merged
  int k = 0;           // size of the top block
  int n_plus_1 = 0;    // combined size of the top two blocks
  int f = 0;           // size of the third block
};

TopBlockFactorization factor_top_blocks(const WeylElement& w);

// Positions (a, b), a < b (0-based), of U_w = U ∩ w^{-1} U^- w for the permutation sigma.
std::vector<std::pair<int, int>> uw_support(const std::vector<int>& sigma);

}  // namespace kloost
