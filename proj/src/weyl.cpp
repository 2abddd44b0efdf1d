#include "kloost/weyl.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kloost {

int BlockComposition::dimension() const { return std::accumulate(blocks.begin(), blocks.end(), 0); }

int BlockComposition::kappa(int l) const {
  if (l < 0 || l > count()) throw std::out_of_range("kappa index");
  return std::accumulate(blocks.begin(), blocks.begin() + l, 0);
}

RationalMatrix simple_reflection(int i, int size) {
  if (i < 1 || i >= size) throw std::out_of_range("simple reflection index");
  RationalMatrix s = RationalMatrix::identity(static_cast<std::size_t>(size));
  const std::size_t a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(i);
  s(a, a) = 0;
  s(b, b) = 0;
  s(a, b) = -1;
  s(b, a) = 1;
  return s;
}

namespace {

// w_{k,size-k} in GL_size, shifted by offset: groups (s_k ... s_n) ... (s_1 ... s_{n+1-k}).
void append_two_block_word(std::vector<int>& out, int k, int size, int offset) {
  const int n = size - 1;
  for (int g = k; g >= 1; --g)
    for (int t = 0; t <= n - k; ++t) out.push_back(offset + g + t);
}

// The rightmost block is moved to the left first: word(k_2..k_n) shifted by k_1, then the k_1 block.
std::vector<int> inductive_word(const std::vector<int>& blocks, std::size_t from, int offset) {
  if (blocks.size() - from <= 1) return {};
  std::vector<int> out = inductive_word(blocks, from + 1, offset + blocks[from]);
  int size = std::accumulate(blocks.begin() + static_cast<long>(from), blocks.end(), 0);
  append_two_block_word(out, blocks[from], size, offset);
  return out;
}

}  // namespace

WeylElement make_admissible(std::vector<int> blocks) {
  if (blocks.empty()) throw InvalidWeylElement("empty block list");
  for (int k : blocks)
    if (k < 1) throw InvalidWeylElement("block sizes must be positive");

  WeylElement w;
  w.comp_.blocks = std::move(blocks);
  const int size = w.comp_.dimension();

  w.sigma_.assign(static_cast<std::size_t>(size), 0);
  int row = 0, col = size;
  for (int k : w.comp_.blocks) {
    col -= k;
    for (int t = 0; t < k; ++t) w.sigma_[static_cast<std::size_t>(row + t)] = col + t;
    row += k;
  }

  w.word_ = inductive_word(w.comp_.blocks, 0, 0);

  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i : w.word_) {
    int a = perm[static_cast<std::size_t>(i - 1)], b = perm[static_cast<std::size_t>(i)];
    if (a > b) throw std::logic_error("expression is not reduced");
    w.gammas_.push_back(Vertex{a + 1, b});
    std::swap(perm[static_cast<std::size_t>(i - 1)], perm[static_cast<std::size_t>(i)]);
  }

  w.signed_ = RationalMatrix::identity(static_cast<std::size_t>(size));
  for (int i : w.word_) w.signed_ = w.signed_ * simple_reflection(i, size);
  return w;
}

RationalMatrix WeylElement::permutation_matrix() const {
  RationalMatrix m(static_cast<std::size_t>(size()));
  for (std::size_t i = 0; i < sigma_.size(); ++i) m(i, static_cast<std::size_t>(sigma_[i])) = 1;
  return m;
}

std::optional<Vertex> WeylElement::s1_vertex() const {
  for (std::size_t t = 0; t < word_.size(); ++t)
    if (word_[t] == 1) return gammas_[t];
  return std::nullopt;
}

bool WeylElement::is_long_element() const {
  return std::all_of(blocks().begin(), blocks().end(), [](int k) { return k == 1; });
}

std::string WeylElement::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t a = 0; a < blocks().size(); ++a) os << (a ? "," : "") << blocks()[a];
  os << ")";
  return os.str();
}

int length(const WeylElement& w) {
  int s = 0;
  const auto& b = w.blocks();
  for (std::size_t a = 0; a < b.size(); ++a)
    for (std::size_t c = a + 1; c < b.size(); ++c) s += b[a] * b[c];
  return s;
}

std::vector<int> reduced_expression(const WeylElement& w) { return w.word(); }

bool IndexSet::contains(const Vertex& v) const { return position(v) >= 0; }

int IndexSet::position(const Vertex& v) const {
  auto it = std::find(ordered.begin(), ordered.end(), v);
  return it == ordered.end() ? -1 : static_cast<int>(it - ordered.begin());
}

int IndexSet::level_of(const Vertex& v) const {
  for (std::size_t l = 0; l < levels.size(); ++l)
    if (std::find(levels[l].begin(), levels[l].end(), v) != levels[l].end()) return static_cast<int>(l) + 1;
  return 0;
}

IndexSet index_set(const WeylElement& w) {
  IndexSet s;
  const int n = w.block_count();
  s.levels.resize(static_cast<std::size_t>(std::max(0, n - 1)));
  for (const Vertex& v : w.gamma_labels()) {
    int level = 0;
    for (int l = 1; l < n; ++l)
      if (v.i <= w.kappa(l) && w.kappa(l) <= v.j && v.j <= w.kappa(l + 1) - 1) level = l;
    if (level == 0) throw std::logic_error("gamma label outside I_w");
    s.levels[static_cast<std::size_t>(level - 1)].push_back(v);
    s.ordered.push_back(v);
  }
  return s;
}

TopBlockFactorization factor_top_blocks(const WeylElement& w) {
  if (w.block_count() < 3) throw InvalidWeylElement("factor_top_blocks needs at least three blocks");
  const auto& b = w.blocks();
  std::vector<int> merged{b[0] + b[1]};
  merged.insert(merged.end(), b.begin() + 2, b.end());
  return TopBlockFactorization{make_admissible(merged), b[0], b[0] + b[1], b[2]};
}

std::vector<std::pair<int, int>> uw_support(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> pi(sigma.size());
  for (int i = 0; i < n; ++i) pi[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] = i;
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (pi[static_cast<std::size_t>(a)] > pi[static_cast<std::size_t>(b)]) out.emplace_back(a, b);
  return out;
}

}  // namespace kloost
