#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rigidkit/error.hpp"
#include "rigidkit/graph.hpp"

namespace rigidkit {

/// Counting parameters for (k,l)-sparsity: |E(H)| <= k|V(H)| - l for every
/// subgraph H spanning at least one edge, with 0 <= l < 2k.
struct SparsityParams {
  int k = 2;
  int l = 2;

  void validate() const {
    if (k < 1 || l < 0 || l >= 2 * k) {
      throw Error(ErrorCode::InvalidParameters,
                  "need k >= 1 and 0 <= l < 2k, got (" + std::to_string(k) + "," + std::to_string(l) + ")");
    }
  }

  friend bool operator==(const SparsityParams&, const SparsityParams&) = default;
};

inline constexpr SparsityParams kTwoTwo{2, 2};

struct SparsityVerdict {
  bool is_sparse = false;
  bool is_tight = false;
  /// A vertex set whose induced subgraph breaks the count; present iff !is_sparse.
  std::optional<std::vector<Vertex>> witness;
};

/// Number of edges of g with both ends in the vertex set `members`.
inline std::size_t induced_edge_count(const Graph& g, std::span<const Vertex> members) {
  std::vector<char> in(static_cast<std::size_t>(g.vertex_count()), 0);
  for (Vertex v : members) in[static_cast<std::size_t>(v)] = 1;
  std::size_t count = 0;
  for (const Edge& e : g.edges())
    if (in[static_cast<std::size_t>(e.u)] && in[static_cast<std::size_t>(e.v)]) ++count;
  return count;
}

/// Whether `members` violates the (k,l) count in g.
inline bool violates_count(const Graph& g, std::span<const Vertex> members, SparsityParams params) {
  const long edges = static_cast<long>(induced_edge_count(g, members));
  return edges >= 1 && edges > static_cast<long>(params.k) * static_cast<long>(members.size()) - params.l;
}

inline constexpr int kBruteForceLimit = 12;

/// Enumerates every vertex subset. The witness is the smallest violating
/// subset, ties broken by the lowest bitmask.
inline SparsityVerdict is_sparse_bruteforce(const Graph& g, SparsityParams params) {
  params.validate();
  const int n = g.vertex_count();
  if (n > kBruteForceLimit) {
    throw Error(ErrorCode::TooLarge, "brute-force sparsity limited to n <= 12, got " + std::to_string(n));
  }
  std::vector<std::uint32_t> masks;
  for (const Edge& e : g.edges()) masks.push_back((1u << e.u) | (1u << e.v));

  const std::uint32_t full = (1u << n) - 1u;
  std::optional<std::uint32_t> worst;
  for (std::uint32_t subset = 1; subset <= full; ++subset) {
    long inside = 0;
    for (std::uint32_t m : masks)
      if ((m & subset) == m) ++inside;
    const long size = std::popcount(subset);
    if (inside >= 1 && inside > params.k * size - params.l) {
      if (!worst || std::popcount(*worst) > size) worst = subset;
    }
  }

  SparsityVerdict verdict;
  if (worst) {
    std::vector<Vertex> members;
    for (int v = 0; v < n; ++v)
      if (*worst & (1u << v)) members.push_back(v);
    verdict.witness = std::move(members);
    return verdict;
  }
  verdict.is_sparse = true;
  verdict.is_tight = static_cast<long>(g.edge_count()) == static_cast<long>(params.k) * n - params.l;
  return verdict;
}

namespace detail {

/// (k,l) pebble game on a directed multigraph of accepted edges. Each vertex
/// starts with k pebbles; an edge uv is accepted iff l+1 pebbles can be
/// gathered on {u,v}, after which one pebble covers it and the edge is
/// oriented out of the vertex that paid.
class PebbleGame {
 public:
  PebbleGame(int n, SparsityParams params)
      : params_(params), pebbles_(static_cast<std::size_t>(n), params.k), out_(static_cast<std::size_t>(n)),
        seen_(static_cast<std::size_t>(n), 0), parent_(static_cast<std::size_t>(n), -1) {}

  bool insert(Vertex u, Vertex v) {
    while (pebble(u) + pebble(v) < params_.l + 1) {
      if (pebble(u) < params_.k && gather(u, v)) continue;
      if (pebble(v) < params_.k && gather(v, u)) continue;
      return false;
    }
    if (pebble(u) > 0) {
      --pebbles_[static_cast<std::size_t>(u)];
      out_[static_cast<std::size_t>(u)].push_back(v);
    } else {
      --pebbles_[static_cast<std::size_t>(v)];
      out_[static_cast<std::size_t>(v)].push_back(u);
    }
    return true;
  }

  /// Vertices reachable from u or v along oriented edges. Called right after
  /// a rejected insert, this set spans a block that is already tight.
  std::vector<Vertex> reach(Vertex u, Vertex v) const {
    std::vector<char> mark(out_.size(), 0);
    std::vector<Vertex> stack{u, v};
    mark[static_cast<std::size_t>(u)] = mark[static_cast<std::size_t>(v)] = 1;
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : out_[static_cast<std::size_t>(x)]) {
        if (!mark[static_cast<std::size_t>(y)]) {
          mark[static_cast<std::size_t>(y)] = 1;
          stack.push_back(y);
        }
      }
    }
    std::vector<Vertex> result;
    for (std::size_t i = 0; i < mark.size(); ++i)
      if (mark[i]) result.push_back(static_cast<Vertex>(i));
    return result;
  }

 private:
  int pebble(Vertex x) const { return pebbles_[static_cast<std::size_t>(x)]; }

  // Depth-first search from `root` (never entering `blocked`) for a vertex
  // holding a free pebble; on success the path is reversed, moving the
  // pebble to root.
  bool gather(Vertex root, Vertex blocked) {
    std::fill(seen_.begin(), seen_.end(), 0);
    seen_[static_cast<std::size_t>(root)] = 1;
    seen_[static_cast<std::size_t>(blocked)] = 1;
    std::vector<Vertex> stack{root};
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : out_[static_cast<std::size_t>(x)]) {
        if (seen_[static_cast<std::size_t>(y)]) continue;
        seen_[static_cast<std::size_t>(y)] = 1;
        parent_[static_cast<std::size_t>(y)] = x;
        if (pebble(y) > 0) {
          --pebbles_[static_cast<std::size_t>(y)];
          ++pebbles_[static_cast<std::size_t>(root)];
          for (Vertex w = y; w != root;) {
            const Vertex p = parent_[static_cast<std::size_t>(w)];
            reverse(p, w);
            w = p;
          }
          return true;
        }
        stack.push_back(y);
      }
    }
    return false;
  }

  void reverse(Vertex from, Vertex to) {
    auto& list = out_[static_cast<std::size_t>(from)];
    list.erase(std::find(list.begin(), list.end(), to));
    out_[static_cast<std::size_t>(to)].push_back(from);
  }

  SparsityParams params_;
  std::vector<int> pebbles_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<char> seen_;
  std::vector<Vertex> parent_;
};

}  // namespace detail

/// Polynomial-time sparsity decision by the (k,l) pebble game.
inline SparsityVerdict is_sparse_pebble(const Graph& g, SparsityParams params) {
  params.validate();
  detail::PebbleGame game(g.vertex_count(), params);
  SparsityVerdict verdict;
  for (const Edge& e : g.edges()) {
    if (!game.insert(e.u, e.v)) {
      verdict.witness = game.reach(e.u, e.v);
      return verdict;
    }
  }
  verdict.is_sparse = true;
  verdict.is_tight =
      static_cast<long>(g.edge_count()) == static_cast<long>(params.k) * g.vertex_count() - params.l;
  return verdict;
}

inline bool is_two_two_tight(const Graph& g) { return is_sparse_pebble(g, kTwoTwo).is_tight; }

namespace detail {
inline void require_edges_in_graph(const Graph& g, std::span<const Edge> subset) {
  for (const Edge& e : subset)
    if (!g.has_edge(e.u, e.v)) throw Error(ErrorCode::EdgeNotInGraph, to_string(e));
}
}  // namespace detail

/// True iff the spanning subgraph (V, subset) is connected.
inline bool spans_all_vertices(const Graph& g, std::span<const Edge> subset) {
  detail::require_edges_in_graph(g, subset);
  UnionFind uf(static_cast<std::size_t>(g.vertex_count()));
  for (const Edge& e : subset) uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
  return uf.components() == 1;
}

inline bool is_spanning_tree(const Graph& g, std::span<const Edge> subset) {
  return spans_all_vertices(g, subset) &&
         subset.size() == static_cast<std::size_t>(g.vertex_count() - 1);
}

}  // namespace rigidkit
