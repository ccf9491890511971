#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rigidkit/error.hpp"
#include "rigidkit/graph.hpp"
#include "rigidkit/random.hpp"
#include "rigidkit/sparsity.hpp"

namespace rigidkit {

/// Adds v0 joined to v1 and v2.
struct Henneberg1 {
  Vertex v1 = 0;
  Vertex v2 = 0;
  friend bool operator==(const Henneberg1&, const Henneberg1&) = default;
};

/// Removes edge v1v2, adds v0 joined to v1, v2 and v3.
struct Henneberg2 {
  Vertex v1 = 0;
  Vertex v2 = 0;
  Vertex v3 = 0;
  friend bool operator==(const Henneberg2&, const Henneberg2&) = default;
};

/// Adds v0 joined to v2 and v3 (both neighbours of v1); each edge v1w listed
/// in `reassigned` becomes v0w.
struct VertexToFourCycle {
  Vertex v1 = 0;
  Vertex v2 = 0;
  Vertex v3 = 0;
  std::vector<Vertex> reassigned;
  friend bool operator==(const VertexToFourCycle&, const VertexToFourCycle&) = default;
};

/// Adds v0 joined to v1 and v2 (v1v2 an edge); each edge v1w listed in
/// `reassigned` becomes v0w. w = v2 cannot be reassigned since v0v2 exists.
struct VertexSplit {
  Vertex v1 = 0;
  Vertex v2 = 0;
  std::vector<Vertex> reassigned;
  friend bool operator==(const VertexSplit&, const VertexSplit&) = default;
};

/// Replaces v1 by a K4 on w1..w4. w1 keeps v1's label, w2..w4 take the next
/// three free labels. `assignment` maps every former neighbour of v1 to the
/// slot 0..3 of the w that inherits the edge.
struct VertexToK4 {
  Vertex v1 = 0;
  std::vector<std::pair<Vertex, int>> assignment;
  friend bool operator==(const VertexToK4&, const VertexToK4&) = default;
};

using Move = std::variant<Henneberg1, Henneberg2, VertexToFourCycle, VertexSplit, VertexToK4>;

enum class MoveKind { H1, H2, V4C, VSplit, VK4 };

inline MoveKind kind_of(const Move& m) { return static_cast<MoveKind>(m.index()); }

inline std::string_view to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::H1: return "H1";
    case MoveKind::H2: return "H2";
    case MoveKind::V4C: return "V4C";
    case MoveKind::VSplit: return "VSPLIT";
    case MoveKind::VK4: return "VK4";
  }
  return "?";
}

/// Scheme A = {H1, H2, V4C, VK4}; scheme B swaps V4C for vertex splitting.
enum class Scheme { A, B };

inline std::vector<MoveKind> scheme_moves(Scheme scheme) {
  if (scheme == Scheme::A) return {MoveKind::H1, MoveKind::H2, MoveKind::V4C, MoveKind::VK4};
  return {MoveKind::H1, MoveKind::H2, MoveKind::VSplit, MoveKind::VK4};
}

inline bool scheme_allows(Scheme scheme, MoveKind kind) {
  const auto kinds = scheme_moves(scheme);
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

struct MoveSequence {
  Graph start = Graph::complete(1);
  std::vector<Move> moves;
};

namespace detail {

inline std::string invalid_reason(const Graph& g, const Move& move) {
  const auto bad_vertex = [&](Vertex v) { return !g.has_vertex(v); };
  return std::visit(
      [&](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Henneberg1>) {
          if (bad_vertex(m.v1) || bad_vertex(m.v2)) return "H1 vertex out of range";
          if (m.v1 == m.v2) return "H1 needs two distinct vertices";
        } else if constexpr (std::is_same_v<T, Henneberg2>) {
          if (bad_vertex(m.v1) || bad_vertex(m.v2) || bad_vertex(m.v3)) return "H2 vertex out of range";
          if (!g.has_edge(m.v1, m.v2)) return "H2 needs v1v2 to be an edge";
          if (m.v3 == m.v1 || m.v3 == m.v2) return "H2 needs v3 outside {v1,v2}";
        } else if constexpr (std::is_same_v<T, VertexToFourCycle>) {
          if (bad_vertex(m.v1) || bad_vertex(m.v2) || bad_vertex(m.v3)) return "V4C vertex out of range";
          if (m.v2 == m.v3) return "V4C needs two distinct edges at v1";
          if (!g.has_edge(m.v1, m.v2) || !g.has_edge(m.v1, m.v3)) return "V4C needs v1v2 and v1v3 to be edges";
          std::set<Vertex> seen;
          for (Vertex w : m.reassigned) {
            if (w == m.v2 || w == m.v3 || !g.has_vertex(w) || !g.has_edge(m.v1, w))
              return "V4C reassigned edge v1-" + std::to_string(w) + " is not a remaining edge at v1";
            if (!seen.insert(w).second) return "V4C reassigns an edge twice";
          }
        } else if constexpr (std::is_same_v<T, VertexSplit>) {
          if (bad_vertex(m.v1) || bad_vertex(m.v2)) return "VSPLIT vertex out of range";
          if (!g.has_edge(m.v1, m.v2)) return "VSPLIT needs v1v2 to be an edge";
          std::set<Vertex> seen;
          for (Vertex w : m.reassigned) {
            if (w == m.v2 || !g.has_vertex(w) || !g.has_edge(m.v1, w))
              return "VSPLIT reassigned edge v1-" + std::to_string(w) + " is not an edge at v1 other than v1v2";
            if (!seen.insert(w).second) return "VSPLIT reassigns an edge twice";
          }
        } else {
          if (bad_vertex(m.v1)) return "VK4 vertex out of range";
          std::set<Vertex> covered;
          for (const auto& [w, slot] : m.assignment) {
            if (slot < 0 || slot > 3) return "VK4 slot must be 0..3";
            if (!g.has_vertex(w) || !g.has_edge(m.v1, w))
              return "VK4 assignment names non-edge v1-" + std::to_string(w);
            if (!covered.insert(w).second) return "VK4 assigns an edge twice";
          }
          if (covered.size() != g.degree(m.v1)) return "VK4 assignment must cover every edge at v1";
        }
        return {};
      },
      move);
}

}  // namespace detail

inline bool is_valid_move(const Graph& g, const Move& move) { return detail::invalid_reason(g, move).empty(); }

/// Applies one move. New vertices receive the next free labels.
inline Graph apply_move(const Graph& g, const Move& move) {
  if (auto why = detail::invalid_reason(g, move); !why.empty()) throw Error(ErrorCode::InvalidMove, why);
  const int n = g.vertex_count();
  std::vector<Edge> edges = g.edges();
  const auto drop = [&](Vertex a, Vertex b) { edges.erase(std::find(edges.begin(), edges.end(), Edge(a, b))); };

  const int new_count = std::visit(
      [&](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        const Vertex v0 = n;
        if constexpr (std::is_same_v<T, Henneberg1>) {
          edges.emplace_back(v0, m.v1);
          edges.emplace_back(v0, m.v2);
          return n + 1;
        } else if constexpr (std::is_same_v<T, Henneberg2>) {
          drop(m.v1, m.v2);
          edges.emplace_back(v0, m.v1);
          edges.emplace_back(v0, m.v2);
          edges.emplace_back(v0, m.v3);
          return n + 1;
        } else if constexpr (std::is_same_v<T, VertexToFourCycle> || std::is_same_v<T, VertexSplit>) {
          for (Vertex w : m.reassigned) {
            drop(m.v1, w);
            edges.emplace_back(v0, w);
          }
          if constexpr (std::is_same_v<T, VertexToFourCycle>) {
            edges.emplace_back(v0, m.v2);
            edges.emplace_back(v0, m.v3);
          } else {
            edges.emplace_back(v0, m.v1);
            edges.emplace_back(v0, m.v2);
          }
          return n + 1;
        } else {
          const Vertex w[4] = {m.v1, n, n + 1, n + 2};
          for (const auto& [u, slot] : m.assignment) {
            if (slot == 0) continue;
            drop(m.v1, u);
            edges.emplace_back(w[slot], u);
          }
          for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) edges.emplace_back(w[i], w[j]);
          return n + 3;
        }
      },
      move);
  return Graph::make(new_count, std::span<const Edge>(edges));
}

inline Graph replay(const MoveSequence& seq) {
  Graph g = seq.start;
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    try {
      g = apply_move(g, seq.moves[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "move " + std::to_string(i) + ": " + e.what());
    }
  }
  return g;
}

namespace detail {

inline std::vector<Vertex> random_subset(Rng& rng, const std::vector<Vertex>& pool) {
  std::vector<Vertex> chosen;
  for (Vertex w : pool)
    if (rng.coin()) chosen.push_back(w);
  return chosen;
}

inline bool kind_available(const Graph& g, MoveKind kind) {
  switch (kind) {
    case MoveKind::H1: return g.vertex_count() >= 2;
    case MoveKind::H2: return g.vertex_count() >= 3 && g.edge_count() >= 1;
    case MoveKind::V4C:
      for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) >= 2) return true;
      return false;
    case MoveKind::VSplit: return g.edge_count() >= 1;
    case MoveKind::VK4: return true;
  }
  return false;
}

inline Move random_move(const Graph& g, MoveKind kind, Rng& rng) {
  const int n = g.vertex_count();
  const auto& edges = g.edges();
  switch (kind) {
    case MoveKind::H1: {
      const Vertex a = static_cast<Vertex>(rng.index(static_cast<std::size_t>(n)));
      Vertex b = static_cast<Vertex>(rng.index(static_cast<std::size_t>(n - 1)));
      if (b >= a) ++b;
      return Henneberg1{a, b};
    }
    case MoveKind::H2: {
      const Edge e = edges[rng.index(edges.size())];
      std::vector<Vertex> others;
      for (Vertex v = 0; v < n; ++v)
        if (!e.touches(v)) others.push_back(v);
      const bool flip = rng.coin();
      return Henneberg2{flip ? e.v : e.u, flip ? e.u : e.v, others[rng.index(others.size())]};
    }
    case MoveKind::V4C: {
      std::vector<Vertex> candidates;
      for (Vertex v = 0; v < n; ++v)
        if (g.degree(v) >= 2) candidates.push_back(v);
      const Vertex v1 = candidates[rng.index(candidates.size())];
      std::vector<Vertex> nbrs = g.neighbours(v1);
      const std::size_t i = rng.index(nbrs.size());
      std::size_t j = rng.index(nbrs.size() - 1);
      if (j >= i) ++j;
      const Vertex v2 = nbrs[i], v3 = nbrs[j];
      std::vector<Vertex> rest;
      for (Vertex w : nbrs)
        if (w != v2 && w != v3) rest.push_back(w);
      return VertexToFourCycle{v1, v2, v3, random_subset(rng, rest)};
    }
    case MoveKind::VSplit: {
      const Edge e = edges[rng.index(edges.size())];
      const bool flip = rng.coin();
      const Vertex v1 = flip ? e.v : e.u, v2 = flip ? e.u : e.v;
      std::vector<Vertex> rest;
      for (Vertex w : g.neighbours(v1))
        if (w != v2) rest.push_back(w);
      return VertexSplit{v1, v2, random_subset(rng, rest)};
    }
    case MoveKind::VK4: {
      const Vertex v1 = static_cast<Vertex>(rng.index(static_cast<std::size_t>(n)));
      VertexToK4 m{v1, {}};
      for (Vertex w : g.neighbours(v1)) m.assignment.emplace_back(w, static_cast<int>(rng.index(4)));
      return m;
    }
  }
  throw Error(ErrorCode::InvalidParameters, "unknown move kind");
}

}  // namespace detail

struct GeneratedGraph {
  Graph graph;
  MoveSequence sequence;
};

/// Grows a (2,2)-tight graph from K1 by random scheme moves until it has at
/// least target_n vertices. Each step picks a move kind uniformly among those
/// currently applicable, then its parameters uniformly.
inline GeneratedGraph generate_tight_graph(int target_n, Scheme scheme, std::uint64_t seed) {
  if (target_n < 1) throw Error(ErrorCode::InvalidParameters, "target_n must be >= 1");
  Rng rng(seed);
  GeneratedGraph out{Graph::complete(1), MoveSequence{}};
  while (out.graph.vertex_count() < target_n) {
    std::vector<MoveKind> available;
    for (MoveKind kind : scheme_moves(scheme))
      if (detail::kind_available(out.graph, kind)) available.push_back(kind);
    const MoveKind kind = available[rng.index(available.size())];
    Move move = detail::random_move(out.graph, kind, rng);
    out.graph = apply_move(out.graph, move);
    out.sequence.moves.push_back(std::move(move));
  }
  return out;
}

/// Which inverse moves the reducer may use.
enum class ReductionMoves { SchemeA, SchemeB, All };

struct Reduction {
  MoveSequence sequence;
  /// relabel[i] is the label in the input graph of vertex i of replay(sequence).
  std::vector<Vertex> relabel;
};

namespace detail {

/// Mutable graph keyed by the input graph's labels, used while peeling
/// vertices off during reduction.
struct WorkGraph {
  std::map<Vertex, std::set<Vertex>> adj;

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& [v, nbrs] : adj) twice += nbrs.size();
    return twice / 2;
  }

  void remove_vertex(Vertex x) {
    for (Vertex w : adj.at(x)) adj.at(w).erase(x);
    adj.erase(x);
  }
  void add_edge(Vertex a, Vertex b) {
    adj.at(a).insert(b);
    adj.at(b).insert(a);
  }

  std::vector<Vertex> common(Vertex a, Vertex b) const {
    std::vector<Vertex> out;
    const auto& na = adj.at(a);
    const auto& nb = adj.at(b);
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(out));
    return out;
  }

  std::string key() const {
    std::string s;
    for (const auto& [v, nbrs] : adj) {
      s += std::to_string(v) + ':';
      for (Vertex w : nbrs)
        if (w > v) s += std::to_string(w) + ',';
      s += ';';
    }
    return s;
  }

  bool is_tight() const {
    std::map<Vertex, int> index;
    for (const auto& [v, nbrs] : adj) index.emplace(v, static_cast<int>(index.size()));
    std::vector<Edge> edges;
    for (const auto& [v, nbrs] : adj)
      for (Vertex w : nbrs)
        if (w > v) edges.emplace_back(index.at(v), index.at(w));
    const int n = static_cast<int>(adj.size());
    if (static_cast<long>(edges.size()) != 2L * n - 2 || !is_connected(n, edges)) return false;
    return is_two_two_tight(Graph::make(n, std::span<const Edge>(edges)));
  }
};

/// A forward move expressed in input-graph labels, plus the input labels of
/// the vertices it creates (in creation order).
struct LabelledStep {
  Move move;
  std::vector<Vertex> created;
};

struct Candidate {
  WorkGraph result;
  LabelledStep step;
};

inline std::vector<Candidate> inverse_candidates(const WorkGraph& g, ReductionMoves allowed) {
  std::vector<Candidate> out;
  const bool allow_v4c = allowed != ReductionMoves::SchemeB;
  const bool allow_split = allowed != ReductionMoves::SchemeA;

  for (const auto& [x, nbrs] : g.adj) {
    if (nbrs.size() != 2) continue;
    WorkGraph h = g;
    h.remove_vertex(x);
    out.push_back({std::move(h), {Henneberg1{*nbrs.begin(), *nbrs.rbegin()}, {x}}});
  }

  for (const auto& [x, nbrs] : g.adj) {
    if (nbrs.size() != 3) continue;
    const std::vector<Vertex> t(nbrs.begin(), nbrs.end());
    for (int skip = 2; skip >= 0; --skip) {
      const Vertex a = t[(skip + 1) % 3], b = t[(skip + 2) % 3], c = t[static_cast<std::size_t>(skip)];
      if (g.adj.at(a).count(b)) continue;
      WorkGraph h = g;
      h.remove_vertex(x);
      h.add_edge(a, b);
      out.push_back({std::move(h), {Henneberg2{std::min(a, b), std::max(a, b), c}, {x}}});
    }
  }

  // Induced K4 with pairwise disjoint outside neighbourhoods.
  for (const auto& [a, na] : g.adj) {
    for (Vertex b : na) {
      if (b <= a) continue;
      for (Vertex c : g.common(a, b)) {
        if (c <= b) continue;
        for (Vertex d : g.common(a, b)) {
          if (d <= c || !g.adj.at(c).count(d)) continue;
          const Vertex quad[4] = {a, b, c, d};
          std::map<Vertex, int> owner;
          bool disjoint = true;
          for (int slot = 0; slot < 4 && disjoint; ++slot) {
            for (Vertex w : g.adj.at(quad[slot])) {
              if (w == a || w == b || w == c || w == d) continue;
              if (!owner.emplace(w, slot).second) {
                disjoint = false;
                break;
              }
            }
          }
          if (!disjoint) continue;
          WorkGraph h = g;
          for (int slot = 1; slot < 4; ++slot) h.remove_vertex(quad[slot]);
          VertexToK4 m{a, {}};
          for (const auto& [w, slot] : owner) {
            h.add_edge(a, w);
            m.assignment.emplace_back(w, slot);
          }
          out.push_back({std::move(h), {std::move(m), {b, c, d}}});
        }
      }
    }
  }

  for (const auto& [x, nx] : g.adj) {
    for (const auto& [y, ny] : g.adj) {
      if (x == y) continue;
      const bool adjacent = nx.count(y) > 0;
      const std::vector<Vertex> shared = g.common(x, y);
      if (!adjacent && allow_v4c && shared.size() == 2) {
        WorkGraph h = g;
        std::vector<Vertex> moved;
        for (Vertex w : nx)
          if (w != shared[0] && w != shared[1]) moved.push_back(w);
        h.remove_vertex(x);
        for (Vertex w : moved) h.add_edge(y, w);
        out.push_back({std::move(h), {VertexToFourCycle{y, shared[0], shared[1], moved}, {x}}});
      }
      if (adjacent && allow_split && shared.size() == 1) {
        WorkGraph h = g;
        std::vector<Vertex> moved;
        for (Vertex w : nx)
          if (w != y && w != shared[0]) moved.push_back(w);
        h.remove_vertex(x);
        for (Vertex w : moved) h.add_edge(y, w);
        out.push_back({std::move(h), {VertexSplit{y, shared[0], moved}, {x}}});
      }
    }
  }
  return out;
}

inline bool reduce_search(const WorkGraph& g, ReductionMoves allowed, std::set<std::string>& visited,
                          std::vector<LabelledStep>& steps) {
  if (g.adj.size() == 1) return true;
  for (Candidate& cand : inverse_candidates(g, allowed)) {
    if (!visited.insert(cand.result.key()).second) continue;
    if (!cand.result.is_tight()) continue;
    steps.push_back(std::move(cand.step));
    if (reduce_search(cand.result, allowed, visited, steps)) return true;
    steps.pop_back();
  }
  return false;
}

// Translates a move from input labels into the labels of the graph being
// replayed, via to_fwd (input label -> replay label).
inline Move translate(const Move& move, const std::map<Vertex, Vertex>& to_fwd) {
  const auto f = [&](Vertex v) { return to_fwd.at(v); };
  return std::visit(
      [&](const auto& m) -> Move {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Henneberg1>) {
          return Henneberg1{f(m.v1), f(m.v2)};
        } else if constexpr (std::is_same_v<T, Henneberg2>) {
          return Henneberg2{f(m.v1), f(m.v2), f(m.v3)};
        } else if constexpr (std::is_same_v<T, VertexToFourCycle>) {
          VertexToFourCycle r{f(m.v1), f(m.v2), f(m.v3), {}};
          for (Vertex w : m.reassigned) r.reassigned.push_back(f(w));
          std::sort(r.reassigned.begin(), r.reassigned.end());
          return r;
        } else if constexpr (std::is_same_v<T, VertexSplit>) {
          VertexSplit r{f(m.v1), f(m.v2), {}};
          for (Vertex w : m.reassigned) r.reassigned.push_back(f(w));
          std::sort(r.reassigned.begin(), r.reassigned.end());
          return r;
        } else {
          VertexToK4 r{f(m.v1), {}};
          for (const auto& [w, slot] : m.assignment) r.assignment.emplace_back(f(w), slot);
          std::sort(r.assignment.begin(), r.assignment.end());
          return r;
        }
      },
      move);
}

}  // namespace detail

/// Certifies (2,2)-tightness constructively: searches for a chain of inverse
/// moves down to K1 (depth first, cheapest moves first, with backtracking and
/// a visited set). Throws NotTight when the pebble game rejects the input.
inline Reduction reduce_to_k1(const Graph& g, ReductionMoves allowed = ReductionMoves::All) {
  if (!is_two_two_tight(g)) throw Error(ErrorCode::NotTight, "graph is not (2,2)-tight");

  detail::WorkGraph work;
  for (Vertex v = 0; v < g.vertex_count(); ++v) work.adj[v];
  for (const Edge& e : g.edges()) work.add_edge(e.u, e.v);

  std::set<std::string> visited{work.key()};
  std::vector<detail::LabelledStep> steps;
  if (!detail::reduce_search(work, allowed, visited, steps)) {
    throw Error(ErrorCode::NotTight, "no inverse-move reduction found");
  }

  // The surviving vertex is the input label never created by any step.
  std::set<Vertex> created;
  for (const auto& step : steps) created.insert(step.created.begin(), step.created.end());
  Vertex root = 0;
  while (created.count(root)) ++root;

  Reduction out;
  out.relabel.push_back(root);
  std::map<Vertex, Vertex> to_fwd{{root, 0}};
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    out.sequence.moves.push_back(detail::translate(it->move, to_fwd));
    for (Vertex v : it->created) {
      to_fwd[v] = static_cast<Vertex>(out.relabel.size());
      out.relabel.push_back(v);
    }
  }
  return out;
}

}  // namespace rigidkit
