#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kloost/weyl.hpp"

namespace kloost {

enum class EdgeKind { plain, dotted };

// Directed, numbered edge. A missing endpoint is a position outside I_w
// (its c, d count as one and its m as zero); `ghost` keeps its coordinates if it has any.
struct Edge {
  EdgeKind kind = EdgeKind::plain;
  int number = 0;
  std::optional<Vertex> source;
  std::optional<Vertex> target;
  std::optional<Vertex> source_ghost;
  std::optional<Vertex> target_ghost;
  int block = 0;  // position of the block the edge belongs to, left to right

  std::string str() const;
};

// Vertices {(i,j): 1 <= i <= k <= j <= n} of one two-block component.
struct DiagramBlock {
  int level = 0;  // l with vertices I_l
  int k = 0;
  int n = 0;
  std::vector<Vertex> vertices;
  bool contains(const Vertex& v) const { return v.i >= 1 && v.i <= k && v.j >= k && v.j <= n; }
};

class Diagram {
 public:
  int rank() const { return rank_; }
  const std::vector<DiagramBlock>& blocks() const { return blocks_; }  // left to right
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Vertex> vertices() const;
  int block_of(const Vertex& v) const;  // -1 when v is not a vertex
  std::size_t plain_adjacency_count() const;

 private:
  friend Diagram build_diagram(const WeylElement& w);
  int rank_ = 0;
  std::vector<DiagramBlock> blocks_;
  std::vector<Edge> edges_;
};

class DiagramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Diagram build_diagram(const WeylElement& w);

struct EdgeSets {
  // plain[i] = E_i, dotted[i] = E'_i for 1 <= i <= N; index 0 is unused.
  std::vector<std::vector<Edge>> plain;
  std::vector<std::vector<Edge>> dotted;
};

EdgeSets edge_sets(const Diagram& d);

// Endpoint treatment of the four path formulas (virtual neighbour directions of the
// first and last vertex): X: below/right, Y: left/right, Z: below/left, W: below/above.
enum class PathRule { X, Y, Z, W };

// Vertex classes by the directions of the two adjacent edges (r, l, u, d).
enum class VertexClass { rd, lu, ld, ru, lr, du };

struct MinimalPath {
  std::vector<Vertex> vertices;
  std::vector<VertexClass> classes;
};

std::vector<MinimalPath> minimal_paths(const Diagram& d, Vertex from, Vertex to, PathRule rule);

std::string to_dot(const Diagram& d);
std::string to_string(VertexClass c);

}  // namespace kloost
