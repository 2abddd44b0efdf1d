#include "kloost/diagram.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace kloost {

std::string Edge::str() const {
  auto end = [](const std::optional<Vertex>& v, const std::optional<Vertex>& g) {
    if (v) return v->str();
    return g ? "(" + g->str() + ")" : std::string("*");
  };
  std::ostringstream os;
  os << (kind == EdgeKind::plain ? "E" : "E'") << number << ":" << end(source, source_ghost) << "->"
     << end(target, target_ghost);
  return os.str();
}

std::vector<Vertex> Diagram::vertices() const {
  std::vector<Vertex> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.vertices.begin(), b.vertices.end());
  return out;
}

int Diagram::block_of(const Vertex& v) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (blocks_[b].contains(v)) return static_cast<int>(b);
  return -1;
}

std::size_t Diagram::plain_adjacency_count() const {
  std::size_t s = 0;
  for (const auto& b : blocks_)
    s += static_cast<std::size_t>(b.k * (b.n - b.k) + (b.k - 1) * (b.n + 1 - b.k));
  return s;
}

Diagram build_diagram(const WeylElement& w) {
  const int nb = w.block_count();
  if (nb < 2) throw DiagramError("diagram needs at least two blocks");
  Diagram d;
  d.rank_ = w.rank();
  const int N = w.rank();

  // Levels n-1, ..., 1 from left to right, as produced by repeated top-block factorization.
  for (int l = nb - 1; l >= 1; --l) {
    DiagramBlock b;
    b.level = l;
    b.k = w.kappa(l);
    b.n = w.kappa(l + 1) - 1;
    for (int j = b.k; j <= b.n; ++j)
      for (int i = 1; i <= b.k; ++i) b.vertices.push_back({i, j});
    d.blocks_.push_back(std::move(b));
  }

  for (std::size_t pos = 0; pos < d.blocks_.size(); ++pos) {
    const DiagramBlock& b = d.blocks_[pos];
    const int blk = static_cast<int>(pos);
    for (int i = 1; i <= b.k; ++i)
      for (int j = b.k; j <= b.n; ++j) {
        if (j < b.n) d.edges_.push_back({EdgeKind::plain, j + 1, Vertex{i, j}, Vertex{i, j + 1}, {}, {}, blk});
        if (i > 1) d.edges_.push_back({EdgeKind::plain, i - 1, Vertex{i, j}, Vertex{i - 1, j}, {}, {}, blk});
      }
    // Entry edge into (k,k) from the empty position (k+1,k).
    d.edges_.push_back({EdgeKind::plain, b.k, std::nullopt, Vertex{b.k, b.k}, Vertex{b.k + 1, b.k}, {}, blk});

    const int num = N + 1 - b.k;
    if (b.level >= 2) {
      // Fan into the block to the right; its last target (kk+1, kk) lies outside I_w.
      const int kk = w.kappa(b.level - 1);
      for (int j = 1; j <= kk + 1; ++j) {
        Edge e{EdgeKind::dotted, num, Vertex{j, b.n}, std::nullopt, {}, {}, blk};
        if (j <= kk)
          e.target = Vertex{j, kk};
        else
          e.target_ghost = Vertex{kk + 1, kk};
        d.edges_.push_back(e);
      }
    } else {
      d.edges_.push_back({EdgeKind::dotted, num, Vertex{1, b.n}, std::nullopt, {}, {}, blk});
    }
  }
  return d;
}

namespace {

Vertex source_position(const Edge& e) {
  if (e.source) return *e.source;
  if (e.source_ghost) return *e.source_ghost;
  return {0, 0};
}

}  // namespace

EdgeSets edge_sets(const Diagram& d) {
  const int N = d.rank();
  EdgeSets s;
  s.plain.resize(static_cast<std::size_t>(N + 1));
  s.dotted.resize(static_cast<std::size_t>(N + 1));
  for (const Edge& e : d.edges()) {
    if (e.number < 1 || e.number > N) throw std::logic_error("edge number out of range");
    (e.kind == EdgeKind::plain ? s.plain : s.dotted)[static_cast<std::size_t>(e.number)].push_back(e);
  }
  // Plain: blocks left to right, then top to bottom (larger row first), then left to right.
  auto plain_key = [](const Edge& e) {
    Vertex v = source_position(e);
    return std::make_tuple(e.block, -v.i, v.j);
  };
  // Dotted: blocks left to right, then bottom to top.
  auto dotted_key = [](const Edge& e) {
    Vertex v = source_position(e);
    return std::make_tuple(e.block, v.i, v.j);
  };
  for (auto& v : s.plain)
    std::stable_sort(v.begin(), v.end(), [&](const Edge& a, const Edge& b) { return plain_key(a) < plain_key(b); });
  for (auto& v : s.dotted)
    std::stable_sort(v.begin(), v.end(), [&](const Edge& a, const Edge& b) { return dotted_key(a) < dotted_key(b); });
  return s;
}

namespace {

char direction(const Vertex& from, const Vertex& to) {
  if (to.i == from.i + 1) return 'u';
  if (to.i == from.i - 1) return 'd';
  if (to.j == from.j + 1) return 'r';
  return 'l';
}

VertexClass classify(char a, char b) {
  if (a > b) std::swap(a, b);
  std::string s{a, b};
  if (s == "dr") return VertexClass::rd;
  if (s == "lu") return VertexClass::lu;
  if (s == "dl") return VertexClass::ld;
  if (s == "ru") return VertexClass::ru;
  if (s == "lr") return VertexClass::lr;
  if (s == "du") return VertexClass::du;
  throw std::logic_error("path vertex with repeated direction");
}

std::pair<char, char> virtual_directions(PathRule rule) {
  switch (rule) {
    case PathRule::X: return {'d', 'r'};
    case PathRule::Y: return {'l', 'r'};
    case PathRule::Z: return {'d', 'l'};
    case PathRule::W: return {'d', 'u'};
  }
  return {'d', 'r'};
}

}  // namespace

std::vector<MinimalPath> minimal_paths(const Diagram& d, Vertex from, Vertex to, PathRule rule) {
  const int bf = d.block_of(from), bt = d.block_of(to);
  if (bf < 0 || bt < 0) throw DiagramError("path endpoint is not a vertex");
  if (bf != bt) throw DiagramError("path endpoints lie in different blocks");

  const int di = to.i >= from.i ? 1 : -1, dj = to.j >= from.j ? 1 : -1;
  const int ni = std::abs(to.i - from.i), nj = std::abs(to.j - from.j);
  const auto [first, last] = virtual_directions(rule);

  std::vector<MinimalPath> out;
  // Choose which of the ni+nj steps are row steps; bitmask over at most ~30 steps.
  const int steps = ni + nj;
  std::vector<bool> row_step(static_cast<std::size_t>(steps), false);
  std::fill(row_step.begin(), row_step.begin() + ni, true);
  std::sort(row_step.begin(), row_step.end());
  do {
    MinimalPath path;
    Vertex v = from;
    path.vertices.push_back(v);
    for (int t = 0; t < steps; ++t) {
      if (row_step[static_cast<std::size_t>(t)])
        v.i += di;
      else
        v.j += dj;
      path.vertices.push_back(v);
    }
    const std::size_t L = path.vertices.size();
    for (std::size_t t = 0; t < L; ++t) {
      char a = t == 0 ? first : direction(path.vertices[t], path.vertices[t - 1]);
      char b = t + 1 == L ? last : direction(path.vertices[t], path.vertices[t + 1]);
      path.classes.push_back(classify(a, b));
    }
    out.push_back(std::move(path));
  } while (std::next_permutation(row_step.begin(), row_step.end()));
  return out;
}

std::string to_string(VertexClass c) {
  switch (c) {
    case VertexClass::rd: return "rd";
    case VertexClass::lu: return "lu";
    case VertexClass::ld: return "ld";
    case VertexClass::ru: return "ru";
    case VertexClass::lr: return "lr";
    case VertexClass::du: return "du";
  }
  return "?";
}

std::string to_dot(const Diagram& d) {
  std::ostringstream os;
  auto node = [](const Vertex& v) { return "\"" + v.str() + "\""; };
  os << "digraph modified_diagram {\n";
  os << "  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
  for (std::size_t b = 0; b < d.blocks().size(); ++b) {
    const auto& blk = d.blocks()[b];
    os << "  subgraph cluster_" << b << " {\n";
    os << "    label=\"I_" << blk.level << "\";\n";
    for (const Vertex& v : blk.vertices) os << "    " << node(v) << " [label=\"" << v.str() << "\"];\n";
    os << "  }\n";
  }
  int ghost = 0;
  for (const Edge& e : d.edges()) {
    std::string src, dst;
    auto endpoint = [&](const std::optional<Vertex>& v) {
      if (v) return node(*v);
      std::string g = "missing_" + std::to_string(ghost++);
      os << "  " << g << " [shape=point, label=\"\"];\n";
      return g;
    };
    src = endpoint(e.source);
    dst = endpoint(e.target);
    os << "  " << src << " -> " << dst << " [label=\"" << e.number << "\"";
    if (e.kind == EdgeKind::dotted) os << ", style=dotted";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace kloost
