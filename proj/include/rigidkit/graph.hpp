#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rigidkit/error.hpp"

namespace rigidkit {

using Vertex = int;

/// Unordered vertex pair, stored with u < v once normalized.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  constexpr Edge() = default;
  constexpr Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  constexpr Vertex other(Vertex x) const { return x == u ? v : u; }
  constexpr bool touches(Vertex x) const { return x == u || x == v; }

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
  return std::to_string(e.u) + "-" + std::to_string(e.v);
}

/// Disjoint-set forest over 0..n-1 with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }

  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t components_;
};

/// A simple connected graph on vertices 0..n-1. Instances are immutable and
/// can only be obtained through validation, so every Graph in circulation is
/// loop-free, duplicate-free and connected. Edges are kept in canonical
/// (lexicographically sorted) order; rigidity-matrix rows follow that order.
class Graph {
 public:
  /// Validates and builds a graph. Throws Error with SelfLoop, DuplicateEdge,
  /// Disconnected, VertexOutOfRange or EmptyGraph.
  static Graph make(int vertex_count, std::span<const std::pair<int, int>> raw_edges) {
    if (vertex_count < 1) {
      throw Error(ErrorCode::EmptyGraph, "a graph needs at least one vertex");
    }
    std::vector<Edge> edges;
    edges.reserve(raw_edges.size());
    for (const auto& [a, b] : raw_edges) {
      if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count) {
        throw Error(ErrorCode::VertexOutOfRange, "edge " + std::to_string(a) + "-" +
                                                     std::to_string(b) + " outside 0.." +
                                                     std::to_string(vertex_count - 1));
      }
      if (a == b) throw Error(ErrorCode::SelfLoop, "loop at vertex " + std::to_string(a));
      edges.emplace_back(a, b);
    }
    return Graph(vertex_count, std::move(edges));
  }

  static Graph make(int vertex_count, std::span<const Edge> edges) {
    std::vector<std::pair<int, int>> raw;
    raw.reserve(edges.size());
    for (const Edge& e : edges) raw.emplace_back(e.u, e.v);
    return make(vertex_count, std::span<const std::pair<int, int>>(raw));
  }

  static Graph make(int vertex_count, std::initializer_list<std::pair<int, int>> raw_edges) {
    return make(vertex_count, std::span<const std::pair<int, int>>(raw_edges.begin(), raw_edges.size()));
  }

  static Graph complete(int n) {
    std::vector<std::pair<int, int>> raw;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) raw.emplace_back(i, j);
    return make(n, std::span<const std::pair<int, int>>(raw));
  }

  static Graph path(int n) {
    std::vector<std::pair<int, int>> raw;
    for (int i = 0; i + 1 < n; ++i) raw.emplace_back(i, i + 1);
    return make(n, std::span<const std::pair<int, int>>(raw));
  }

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbours(Vertex v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
  std::size_t degree(Vertex v) const { return neighbours(v).size(); }

  bool has_vertex(Vertex v) const { return v >= 0 && v < n_; }

  bool has_edge(Vertex a, Vertex b) const { return edge_index(a, b) >= 0; }

  /// Row index of edge ab in canonical order, or -1.
  long edge_index(Vertex a, Vertex b) const {
    if (a == b) return -1;
    const Edge key(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return -1;
    return static_cast<long>(it - edges_.begin());
  }

  /// Copy without edge ab; throws EdgeNotInGraph or Disconnected.
  Graph without_edge(Vertex a, Vertex b) const {
    const long idx = edge_index(a, b);
    if (idx < 0) throw Error(ErrorCode::EdgeNotInGraph, to_string(Edge(a, b)));
    std::vector<Edge> rest = edges_;
    rest.erase(rest.begin() + idx);
    return Graph(n_, std::move(rest));
  }

  /// Copy with one extra edge; throws DuplicateEdge, SelfLoop or VertexOutOfRange.
  Graph with_edge(Vertex a, Vertex b) const {
    std::vector<std::pair<int, int>> raw;
    raw.reserve(edges_.size() + 1);
    for (const Edge& e : edges_) raw.emplace_back(e.u, e.v);
    raw.emplace_back(a, b);
    return make(n_, std::span<const std::pair<int, int>>(raw));
  }

  /// Image under a vertex relabelling: vertex i becomes perm[i].
  Graph relabelled(std::span<const Vertex> perm) const {
    if (perm.size() != static_cast<std::size_t>(n_)) {
      throw Error(ErrorCode::InvalidParameters, "relabelling has wrong length");
    }
    std::vector<std::pair<int, int>> raw;
    for (const Edge& e : edges_) raw.emplace_back(perm[e.u], perm[e.v]);
    return make(n_, std::span<const std::pair<int, int>>(raw));
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adjacency_(static_cast<std::size_t>(n)) {
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
      throw Error(ErrorCode::DuplicateEdge, "edge " + to_string(*dup) + " listed twice");
    }
    UnionFind components(static_cast<std::size_t>(n));
    for (const Edge& e : edges_) {
      adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
      adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
      components.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
    if (components.components() != 1) {
      throw Error(ErrorCode::Disconnected,
                  "graph has " + std::to_string(components.components()) + " components");
    }
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

/// Checks connectivity of an arbitrary edge list on n vertices without
/// building a Graph (useful for candidate graphs that may be disconnected).
inline bool is_connected(int n, std::span<const Edge> edges) {
  if (n < 1) return false;
  UnionFind uf(static_cast<std::size_t>(n));
  for (const Edge& e : edges) uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
  return uf.components() == 1;
}

/// Graph validation entry point mirroring the raw JSON input form.
inline Graph validate_graph(int raw_vertex_count, std::span<const std::pair<int, int>> raw_edge_list) {
  return Graph::make(raw_vertex_count, raw_edge_list);
}

}  // namespace rigidkit
