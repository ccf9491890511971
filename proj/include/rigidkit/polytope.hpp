#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rigidkit/error.hpp"
#include "rigidkit/framework.hpp"
#include "rigidkit/graph.hpp"
#include "rigidkit/linalg.hpp"
#include "rigidkit/lq.hpp"
#include "rigidkit/moves.hpp"
#include "rigidkit/random.hpp"
#include "rigidkit/sparsity.hpp"

namespace rigidkit {

/// Relative gap below which the top two facet scores count as a tie.
inline constexpr double kTieTolerance = 1e-9;

inline double polytope_length(const Vector& a, const PolytopeNorm& p) {
  double best = 0.0;
  for (const Vector& b : p.facets()) best = std::max(best, std::abs(a.dot(b)));
  return best;
}

/// Maximizing facet of a, with the relative gap to the runner-up.
struct FacetChoice {
  std::optional<std::size_t> index;  // 0-based; empty on a tie
  double margin = 0.0;
};

inline FacetChoice maximizing_facet(const Vector& a, const PolytopeNorm& p, double tie_tolerance = kTieTolerance) {
  double top = -1.0, second = -1.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < p.facet_count(); ++k) {
    const double s = std::abs(a.dot(p.facet(k)));
    if (s > top) {
      second = top;
      top = s;
      arg = k;
    } else if (s > second) {
      second = s;
    }
  }
  FacetChoice out;
  if (top <= 0.0) return out;
  out.margin = second < 0.0 ? 1.0 : (top - second) / top;
  if (out.margin >= tie_tolerance) out.index = arg;
  return out;
}

/// b_k for the unique maximizing facet k, the zero vector on ties.
inline Vector kappa(const Vector& a, const PolytopeNorm& p) {
  const FacetChoice c = maximizing_facet(a, p);
  return c.index ? p.facet(*c.index) : Vector::Zero(a.size());
}

struct FrameworkColouring {
  /// Per canonical edge: colour 1..s, or 0 where the edge is tied.
  std::vector<int> colours;
  std::vector<double> margins;
  bool well_positioned = true;
  std::vector<Edge> offending_edges;
  int facet_count = 0;

  std::vector<Edge> class_edges(const Graph& g, int colour) const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < colours.size(); ++i)
      if (colours[i] == colour) out.push_back(g.edges()[i]);
    return out;
  }

  int colours_used() const {
    std::vector<int> used;
    for (int c : colours)
      if (c > 0 && std::find(used.begin(), used.end(), c) == used.end()) used.push_back(c);
    return static_cast<int>(used.size());
  }
};

namespace detail {
inline const PolytopeNorm& require_polytope(const Framework& f) {
  const auto* p = std::get_if<PolytopeNorm>(&f.norm());
  if (!p) throw Error(ErrorCode::InvalidNorm, "framework does not use a polytopic norm");
  return *p;
}
}  // namespace detail

inline FrameworkColouring colour_framework(const Framework& f) {
  const PolytopeNorm& p = detail::require_polytope(f);
  FrameworkColouring out;
  out.facet_count = static_cast<int>(p.facet_count());
  for (const Edge& e : f.graph().edges()) {
    const FacetChoice c = maximizing_facet(f.edge_vector(e), p);
    out.colours.push_back(c.index ? static_cast<int>(*c.index) + 1 : 0);
    out.margins.push_back(c.margin);
    if (!c.index) {
      out.well_positioned = false;
      out.offending_edges.push_back(e);
    }
  }
  return out;
}

inline std::string describe_offending(const FrameworkColouring& c) {
  std::string s;
  for (const Edge& e : c.offending_edges) s += (s.empty() ? "" : ", ") + to_string(e);
  return s;
}

/// Row of edge (u,v): kappa(p_u - p_v) in u's block, its negative in v's.
/// Tied edges give zero rows, which is only permitted with allow_degenerate.
inline Matrix rigidity_matrix_poly(const Framework& f, bool allow_degenerate = false) {
  const PolytopeNorm& p = detail::require_polytope(f);
  const FrameworkColouring colouring = colour_framework(f);
  if (!colouring.well_positioned && !allow_degenerate) {
    throw Error(ErrorCode::NotWellPositioned, "tied edges: " + describe_offending(colouring));
  }
  const int d = f.dim();
  const auto& edges = f.graph().edges();
  Matrix r = Matrix::Zero(static_cast<Eigen::Index>(edges.size()),
                          static_cast<Eigen::Index>(f.graph().vertex_count()) * d);
  for (std::size_t row = 0; row < edges.size(); ++row) {
    const int colour = colouring.colours[row];
    if (colour == 0) continue;
    const Vector& b = p.facet(static_cast<std::size_t>(colour - 1));
    r.block(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(edges[row].u) * d, 1, d) = b.transpose();
    r.block(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(edges[row].v) * d, 1, d) = -b.transpose();
  }
  return r;
}

struct TreeCriteria {
  /// Indexed by colour - 1: whether the monochrome subgraph G_k spans V.
  std::vector<bool> class_spans;
  std::vector<bool> class_is_tree;
  int colours_used = 0;
  /// Necessity applies when at most d colours occur.
  bool necessity_applicable = false;
  /// Every occurring colour class spans.
  bool necessary_holds = false;
  /// Some spanning colour classes have facets spanning R^d.
  bool sufficient_holds = false;
  /// d = 2, s = 2: G_1 and G_2 are (edge-disjoint) spanning trees.
  bool edge_disjoint_spanning_trees = false;
  std::optional<std::array<std::vector<Edge>, 2>> trees;
};

inline TreeCriteria spanning_tree_criteria(const Framework& f) {
  const PolytopeNorm& p = detail::require_polytope(f);
  const FrameworkColouring colouring = colour_framework(f);
  if (!colouring.well_positioned) {
    throw Error(ErrorCode::NotWellPositioned, "tied edges: " + describe_offending(colouring));
  }
  const Graph& g = f.graph();
  const int d = f.dim();
  TreeCriteria out;
  out.colours_used = colouring.colours_used();
  out.necessity_applicable = out.colours_used <= d;
  out.necessary_holds = true;

  std::vector<Vector> spanning_facets;
  for (int k = 1; k <= static_cast<int>(p.facet_count()); ++k) {
    const std::vector<Edge> cls = colouring.class_edges(g, k);
    const bool spans = spans_all_vertices(g, cls);
    out.class_spans.push_back(spans);
    out.class_is_tree.push_back(is_spanning_tree(g, cls));
    if (spans) spanning_facets.push_back(p.facet(static_cast<std::size_t>(k - 1)));
    if (!cls.empty() && !spans) out.necessary_holds = false;
  }
  if (!spanning_facets.empty()) {
    Matrix stacked(static_cast<Eigen::Index>(spanning_facets.size()), d);
    for (std::size_t i = 0; i < spanning_facets.size(); ++i)
      stacked.row(static_cast<Eigen::Index>(i)) = spanning_facets[i].transpose();
    out.sufficient_holds = numerical_rank(stacked).rank == d;
  }
  if (d == 2 && p.facet_count() == 2 && out.class_is_tree[0] && out.class_is_tree[1]) {
    out.edge_disjoint_spanning_trees = true;
    out.trees = std::array<std::vector<Edge>, 2>{colouring.class_edges(g, 1), colouring.class_edges(g, 2)};
  }
  return out;
}

struct PolytopeAnalysis {
  RigidityReport report;
  FrameworkColouring colouring;
  /// Absent for non-well-positioned frameworks analyzed with allow_degenerate.
  std::optional<TreeCriteria> criteria;
  /// Sufficiency implies rigidity, and rigidity implies necessity where it applies.
  bool criteria_consistent = true;
};

struct PolytopeAnalysisOptions {
  TolerancePolicy policy{};
  bool allow_degenerate = false;
};

inline PolytopeAnalysis analyze_poly(const Framework& f, const PolytopeAnalysisOptions& options = {}) {
  PolytopeAnalysis out;
  const Matrix r = rigidity_matrix_poly(f, options.allow_degenerate);
  out.report = detail::report_from_matrix(r, f.graph().vertex_count(), f.dim(), options.policy);
  out.colouring = colour_framework(f);
  if (out.colouring.well_positioned) {
    out.criteria = spanning_tree_criteria(f);
    const TreeCriteria& c = *out.criteria;
    if (c.sufficient_holds && !out.report.is_rigid) out.criteria_consistent = false;
    if (c.necessity_applicable && out.report.is_rigid && !c.necessary_holds) out.criteria_consistent = false;
    if (c.edge_disjoint_spanning_trees && !out.report.is_minimal) out.criteria_consistent = false;
  }
  return out;
}

inline FlexClass classify_flex_poly(const Framework& f, const Vector& u, FlexTolerance tol = {}) {
  return detail::classify_against(rigidity_matrix_poly(f), u, f.graph().vertex_count(), f.dim(), tol);
}

/// Nontrivial kernel vector built from a colour class that fails to span:
/// u = 0 on the component V_1 of vertex 0 in G_colour and u = z elsewhere,
/// with z a unit vector orthogonal to the facets of every edge crossing the
/// cut. Throws ColourSpans if G_colour spans, NoWitness if no such z exists.
inline Vector partition_flex_witness(const Framework& f, int colour) {
  const PolytopeNorm& p = detail::require_polytope(f);
  if (colour < 1 || colour > static_cast<int>(p.facet_count())) {
    throw Error(ErrorCode::InvalidParameters, "colour out of range");
  }
  const FrameworkColouring colouring = colour_framework(f);
  if (!colouring.well_positioned) {
    throw Error(ErrorCode::NotWellPositioned, "tied edges: " + describe_offending(colouring));
  }
  const Graph& g = f.graph();
  const int n = g.vertex_count();
  const int d = f.dim();
  UnionFind uf(static_cast<std::size_t>(n));
  for (const Edge& e : colouring.class_edges(g, colour)) uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
  if (uf.components() == 1) throw Error(ErrorCode::ColourSpans, "colour " + std::to_string(colour) + " spans");

  const std::size_t root = uf.find(0);
  std::vector<char> second_side(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) second_side[static_cast<std::size_t>(v)] = uf.find(static_cast<std::size_t>(v)) != root;

  std::vector<int> crossing_colours;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    if (second_side[static_cast<std::size_t>(e.u)] != second_side[static_cast<std::size_t>(e.v)]) {
      const int c = colouring.colours[i];
      if (std::find(crossing_colours.begin(), crossing_colours.end(), c) == crossing_colours.end())
        crossing_colours.push_back(c);
    }
  }
  Vector z;
  if (crossing_colours.empty()) {
    z = Vector::Unit(d, 0);
  } else {
    Matrix w(static_cast<Eigen::Index>(crossing_colours.size()), d);
    for (std::size_t i = 0; i < crossing_colours.size(); ++i)
      w.row(static_cast<Eigen::Index>(i)) = p.facet(static_cast<std::size_t>(crossing_colours[i] - 1)).transpose();
    const SvdAnalysis svd = analyze_svd(w);
    if (svd.nullspace.cols() == 0) {
      throw Error(ErrorCode::NoWitness, "facets of the crossing edges span R^d");
    }
    z = svd.nullspace.col(0);
  }
  Vector u = Vector::Zero(static_cast<Eigen::Index>(n) * d);
  for (int v = 0; v < n; ++v)
    if (second_side[static_cast<std::size_t>(v)]) u.segment(static_cast<Eigen::Index>(v) * d, d) = z;
  return u;
}

/// Starting values for the constructor's "sufficiently small" parameters.
/// epsilon skews the seed K4 and offsets split vertices; r scales inserted
/// K4s; delta bounds the jitter around line intersections. r and delta are
/// relative to the local edge length.
struct PlacementParams {
  double epsilon = 0.1;
  double r = 1.0;
  double delta = 0.05;

  void validate() const {
    if (!(epsilon > 0.0) || !(r > 0.0) || !(delta > 0.0) || !std::isfinite(epsilon) || !std::isfinite(r) ||
        !std::isfinite(delta)) {
      throw Error(ErrorCode::InvalidParameters, "placement parameters must be positive and finite");
    }
  }
};

/// Matrix with rows b_1..b_d. Mapping placements by it (and facets by its
/// inverse transpose) turns the norm into the max norm with standard facets.
inline Matrix linf_change_of_basis(const PolytopeNorm& p) {
  if (p.facet_count() != static_cast<std::size_t>(p.dim())) {
    throw Error(ErrorCode::InvalidNorm, "change of basis to the max norm needs exactly d facets");
  }
  Matrix b(p.dim(), p.dim());
  for (int k = 0; k < p.dim(); ++k) b.row(k) = p.facet(static_cast<std::size_t>(k)).transpose();
  return b;
}

/// Isometric image under an invertible linear map A: points p -> A p and
/// facets b -> A^{-T} b, so every facet score a . b is preserved.
inline Framework apply_linear_map(const Framework& f, const Matrix& a) {
  const PolytopeNorm& p = detail::require_polytope(f);
  const int d = f.dim();
  if (a.rows() != d || a.cols() != d) throw Error(ErrorCode::DimensionMismatch, "map must be d x d");
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw Error(ErrorCode::InvalidParameters, "map is singular");
  const Matrix inv_t = lu.inverse().transpose();
  std::vector<Vector> facets;
  for (const Vector& b : p.facets()) facets.push_back(inv_t * b);
  Placement moved = (a * f.placement().transpose()).transpose();
  return Framework::make(f.graph(), std::move(moved), PolytopeNorm::make(std::move(facets)));
}

namespace detail {

using Point2 = Eigen::Vector2d;

/// Max-norm colour (1 = horizontal-dominant, 2 = vertical) and relative gap.
inline std::pair<int, double> linf_colour(const Point2& a) {
  const double x = std::abs(a.x()), y = std::abs(a.y());
  const double top = std::max(x, y);
  if (top == 0.0) return {0, 0.0};
  const double margin = std::abs(x - y) / top;
  if (margin < kTieTolerance) return {0, margin};
  return {x > y ? 1 : 2, margin};
}

inline double linf_length(const Point2& a) { return a.cwiseAbs().maxCoeff(); }

/// Margin required of edges created or re-attached by the constructor, well
/// above the tie tolerance so later floating-point maps cannot flip colours.
inline constexpr double kConstructionMargin = 1e-6;
inline constexpr int kMaxHalvings = 60;
inline constexpr int kSamplesPerLevel = 6;

struct ColourState {
  std::map<Edge, int> colour;

  static ColourState of(const Graph& g, const std::vector<Point2>& y) {
    ColourState s;
    for (const Edge& e : g.edges()) s.colour[e] = linf_colour(y[e.u] - y[e.v]).first;
    return s;
  }
};

// Every edge in `required` must take its colour with a healthy margin.
inline bool meets(const std::vector<Point2>& y, const std::map<Edge, int>& required) {
  for (const auto& [e, colour] : required) {
    if (y[e.u] == y[e.v]) return false;
    const auto [c, margin] = linf_colour(y[e.u] - y[e.v]);
    if (c != colour || margin < kConstructionMargin) return false;
  }
  return true;
}

inline double local_scale(const Graph& g, const std::vector<Point2>& y, Vertex v) {
  double scale = std::numeric_limits<double>::infinity();
  for (Vertex w : g.neighbours(v)) scale = std::min(scale, linf_length(y[v] - y[w]));
  return std::isfinite(scale) ? scale : 1.0;
}

}  // namespace detail

/// Realizes a scheme-B move sequence (from K1) in the plane so that both
/// monochrome subgraphs span at every step. Each move is placed by its local
/// recipe and the parameters are halved until every new or re-attached edge
/// has its prescribed colour. Throws ParameterUnderflow naming the failing
/// move when halving runs out.
inline Framework construct_coloured_placement(const MoveSequence& seq, const PolytopeNorm& norm,
                                              const PlacementParams& params, std::uint64_t seed) {
  using detail::Point2;
  params.validate();
  if (norm.dim() != 2 || norm.facet_count() != 2) {
    throw Error(ErrorCode::InvalidNorm, "constructor needs exactly two independent facets in the plane");
  }
  if (seq.start.vertex_count() != 1) throw Error(ErrorCode::InvalidParameters, "sequence must start at K1");
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    if (!scheme_allows(Scheme::B, kind_of(seq.moves[i]))) {
      throw Error(ErrorCode::InvalidParameters, "move " + std::to_string(i) + " (" +
                                                    std::string(to_string(kind_of(seq.moves[i]))) +
                                                    ") is not a scheme-B move");
    }
  }

  Rng rng(seed);
  Graph g = seq.start;
  std::vector<Point2> y{Point2::Zero()};

  for (std::size_t index = 0; index < seq.moves.size(); ++index) {
    const Move& move = seq.moves[index];
    const Graph next = apply_move(g, move);
    const Vertex v0 = g.vertex_count();
    const detail::ColourState old = detail::ColourState::of(g, y);
    const auto underflow = [&] {
      return Error(ErrorCode::ParameterUnderflow,
                   "move " + std::to_string(index) + " (" + std::string(to_string(kind_of(move))) +
                       "): no parameter satisfied the colour constraints");
    };
    std::optional<std::vector<Point2>> placed;

    if (const auto* m = std::get_if<Henneberg1>(&move)) {
      const Point2 corner(y[m->v2].x(), y[m->v1].y());
      const double scale = detail::linf_length(y[m->v1] - y[m->v2]);
      const std::map<Edge, int> required{{Edge(v0, m->v1), 1}, {Edge(v0, m->v2), 2}};
      for (int level = 0; level < detail::kMaxHalvings && !placed; ++level) {
        const double delta = params.delta * std::ldexp(1.0, -level) * scale;
        for (int s = 0; s < detail::kSamplesPerLevel && !placed; ++s) {
          std::vector<Point2> cand = y;
          cand.push_back(corner + delta * Point2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
          if (detail::meets(cand, required)) placed = std::move(cand);
        }
      }
    } else if (const auto* m = std::get_if<Henneberg2>(&move)) {
      const int c = old.colour.at(Edge(m->v1, m->v2));
      if (c == 0) throw underflow();
      const int o = 3 - c;
      const Point2 dir = y[m->v2] - y[m->v1];
      const int ci = c - 1;
      const double s = (y[m->v3](ci) - y[m->v1](ci)) / dir(ci);
      const Point2 corner = y[m->v1] + s * dir;
      const double scale = detail::linf_length(dir);
      const std::map<Edge, int> required{{Edge(v0, m->v1), c}, {Edge(v0, m->v2), c}, {Edge(v0, m->v3), o}};
      for (int level = 0; level < detail::kMaxHalvings && !placed; ++level) {
        const double delta = params.delta * std::ldexp(1.0, -level) * scale;
        for (int k = 0; k < detail::kSamplesPerLevel && !placed; ++k) {
          std::vector<Point2> cand = y;
          cand.push_back(corner + delta * Point2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
          if (detail::meets(cand, required)) placed = std::move(cand);
        }
      }
    } else if (const auto* m = std::get_if<VertexSplit>(&move)) {
      const int c = old.colour.at(Edge(m->v1, m->v2));
      if (c == 0) throw underflow();
      const int o = 3 - c;
      std::map<Edge, int> required{{Edge(v0, m->v1), o}, {Edge(v0, m->v2), c}};
      for (Vertex w : m->reassigned) required[Edge(v0, w)] = old.colour.at(Edge(m->v1, w));
      const double scale = detail::local_scale(g, y, m->v1);
      for (int level = 0; level < detail::kMaxHalvings && !placed; ++level) {
        const double eps = params.epsilon * std::ldexp(1.0, -level) * scale;
        std::vector<Point2> cand = y;
        cand.push_back(y[m->v1] + eps * Point2::Unit(o - 1));
        if (detail::meets(cand, required)) placed = std::move(cand);
      }
    } else {
      const auto& k = std::get<VertexToK4>(move);
      const Vertex w[4] = {k.v1, v0, v0 + 1, v0 + 2};
      std::map<Edge, int> k4{{Edge(w[0], w[1]), 1}, {Edge(w[0], w[2]), 1}, {Edge(w[2], w[3]), 1},
                             {Edge(w[0], w[3]), 2}, {Edge(w[1], w[2]), 2}, {Edge(w[1], w[3]), 2}};
      const auto k4_at = [&](double r, double eps) {
        std::vector<Point2> cand = y;
        const Point2 base = y[k.v1];
        cand.push_back(base + r * Point2(1.0, 0.0));
        cand.push_back(base + r * Point2(1.0, 1.0 - eps));
        cand.push_back(base + r * Point2(0.0, 1.0 + eps));
        return cand;
      };
      // The skew only has to make the K4 itself well coloured; that test is
      // scale free, so settle epsilon first, then shrink r.
      double eps = params.epsilon;
      for (int level = 0; level < detail::kMaxHalvings && !detail::meets(k4_at(1.0, eps), k4); ++level) eps *= 0.5;
      if (!detail::meets(k4_at(1.0, eps), k4)) throw underflow();

      std::map<Edge, int> required = k4;
      for (const auto& [u, slot] : k.assignment) required[Edge(w[slot], u)] = old.colour.at(Edge(k.v1, u));
      const double scale = detail::local_scale(g, y, k.v1);
      for (int level = 0; level < detail::kMaxHalvings && !placed; ++level) {
        std::vector<Point2> cand = k4_at(params.r * std::ldexp(1.0, -level) * scale, eps);
        if (detail::meets(cand, required)) placed = std::move(cand);
      }
    }
    if (!placed) throw underflow();
    y = std::move(*placed);
    g = next;
  }

  // Back from max-norm coordinates to the given facets: p = B^{-1} y.
  const Matrix b = linf_change_of_basis(norm);
  const Matrix b_inv = b.inverse();
  Placement p(g.vertex_count(), 2);
  for (int v = 0; v < g.vertex_count(); ++v) p.row(v) = (b_inv * y[static_cast<std::size_t>(v)]).transpose();
  Framework f = Framework::make(g, std::move(p), norm);

  const FrameworkColouring colouring = colour_framework(f);
  if (!colouring.well_positioned || !spans_all_vertices(g, colouring.class_edges(g, 1)) ||
      !spans_all_vertices(g, colouring.class_edges(g, 2))) {
    throw Error(ErrorCode::ParameterUnderflow, "final placement lost its colouring after the change of basis");
  }
  return f;
}

}  // namespace rigidkit
