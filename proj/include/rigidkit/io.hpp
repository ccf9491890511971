#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigidkit/error.hpp"
#include "rigidkit/framework.hpp"
#include "rigidkit/graph.hpp"
#include "rigidkit/moves.hpp"
#include "rigidkit/polytope.hpp"

namespace rigidkit::io {

using json = nlohmann::json;

namespace detail {

template <typename T>
T get(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string(what) + " is missing \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + "." + key + ": " + e.what());
  }
}

inline Vector to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must contain numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline json from_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- graphs

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
  const int n = detail::get<int>(j, "n", "graph");
  const json edges = detail::get<json>(j, "edges", "graph");
  if (!edges.is_array()) throw Error(ErrorCode::ParseError, "graph.edges must be an array");
  std::vector<std::pair<int, int>> raw;
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw Error(ErrorCode::ParseError, "each edge must be a pair of integers");
    }
    raw.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return validate_graph(n, raw);
}

// ----------------------------------------------------------------- norms

/// Max norm: facets (1,0),(0,1). l1 in the plane: facets (1,1),(1,-1), so
/// the polytopic length equals |a_1| + |a_2| exactly.
inline NormSpec norm_from_json(const json& j, int d) {
  const std::string type = detail::get<std::string>(j, "type", "norm");
  if (type == "linf") return PolytopeNorm::linf(d);
  if (type == "l1") return PolytopeNorm::l1(d);
  if (type == "lq") {
    const json q = detail::get<json>(j, "q", "norm");
    if (q.is_string()) {
      const std::string s = q.get<std::string>();
      if (s == "inf" || s == "infinity") return PolytopeNorm::linf(d);
      throw Error(ErrorCode::ParseError, "norm.q must be a number or \"inf\"");
    }
    return norm_from_q(detail::get<double>(j, "q", "norm"), d);
  }
  if (type == "polytope") {
    const json facets = detail::get<json>(j, "facets", "norm");
    if (!facets.is_array()) throw Error(ErrorCode::ParseError, "norm.facets must be an array");
    std::vector<Vector> list;
    for (const json& f : facets) list.push_back(detail::to_vector(f, "facet"));
    return PolytopeNorm::make(std::move(list));
  }
  throw Error(ErrorCode::ParseError, "unknown norm type \"" + type + "\"");
}

inline json to_json(const NormSpec& norm) {
  if (const auto* lq = std::get_if<LqNorm>(&norm)) return {{"type", "lq"}, {"q", lq->q()}};
  json facets = json::array();
  for (const Vector& b : std::get<PolytopeNorm>(norm).facets()) facets.push_back(detail::from_vector(b));
  return {{"type", "polytope"}, {"facets", facets}};
}

// ------------------------------------------------------------ frameworks

inline Placement placement_from_json(const json& j, int n) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "placement must be an array of points");
  if (j.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::DimensionMismatch, "placement has " + std::to_string(j.size()) + " points for " +
                                                  std::to_string(n) + " vertices");
  }
  const std::size_t d = n > 0 && j[0].is_array() ? j[0].size() : 0;
  if (d == 0) throw Error(ErrorCode::ParseError, "placement points must be nonempty arrays");
  Placement p(n, static_cast<Eigen::Index>(d));
  for (int v = 0; v < n; ++v) {
    const Vector point = detail::to_vector(j[static_cast<std::size_t>(v)], "placement point");
    if (point.size() != static_cast<Eigen::Index>(d)) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
    p.row(v) = point.transpose();
  }
  return p;
}

inline json placement_to_json(const Placement& p) {
  json out = json::array();
  for (Eigen::Index v = 0; v < p.rows(); ++v) out.push_back(detail::from_vector(p.row(v).transpose()));
  return out;
}

inline Framework framework_from_json(const json& j) {
  Graph g = graph_from_json(detail::get<json>(j, "graph", "framework"));
  Placement p = placement_from_json(detail::get<json>(j, "placement", "framework"), g.vertex_count());
  NormSpec norm = norm_from_json(detail::get<json>(j, "norm", "framework"), static_cast<int>(p.cols()));
  return Framework::make(std::move(g), std::move(p), std::move(norm));
}

inline json to_json(const Framework& f) {
  return {{"graph", to_json(f.graph())}, {"placement", placement_to_json(f.placement())}, {"norm", to_json(f.norm())}};
}

// ----------------------------------------------------------------- moves

inline json to_json(const Move& move) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Henneberg1>) {
          return {{"type", "H1"}, {"v1", m.v1}, {"v2", m.v2}};
        } else if constexpr (std::is_same_v<T, Henneberg2>) {
          return {{"type", "H2"}, {"v1", m.v1}, {"v2", m.v2}, {"v3", m.v3}};
        } else if constexpr (std::is_same_v<T, VertexToFourCycle>) {
          return {{"type", "V4C"}, {"v1", m.v1}, {"v2", m.v2}, {"v3", m.v3}, {"reassigned", m.reassigned}};
        } else if constexpr (std::is_same_v<T, VertexSplit>) {
          return {{"type", "VSPLIT"}, {"v1", m.v1}, {"v2", m.v2}, {"reassigned", m.reassigned}};
        } else {
          json assignment = json::array();
          for (const auto& [w, slot] : m.assignment) assignment.push_back({w, slot});
          return {{"type", "VK4"}, {"v1", m.v1}, {"assignment", assignment}};
        }
      },
      move);
}

inline Move move_from_json(const json& j) {
  const std::string type = detail::get<std::string>(j, "type", "move");
  const auto v = [&](const char* key) { return detail::get<int>(j, key, "move"); };
  const auto list = [&](const char* key) {
    return j.contains(key) ? detail::get<std::vector<int>>(j, key, "move") : std::vector<int>{};
  };
  if (type == "H1") return Henneberg1{v("v1"), v("v2")};
  if (type == "H2") return Henneberg2{v("v1"), v("v2"), v("v3")};
  if (type == "V4C") return VertexToFourCycle{v("v1"), v("v2"), v("v3"), list("reassigned")};
  if (type == "VSPLIT") return VertexSplit{v("v1"), v("v2"), list("reassigned")};
  if (type == "VK4") {
    VertexToK4 m{v("v1"), {}};
    if (j.contains("assignment")) {
      for (const auto& pair : detail::get<std::vector<std::vector<int>>>(j, "assignment", "move")) {
        if (pair.size() != 2) throw Error(ErrorCode::ParseError, "VK4 assignment entries are [neighbour, slot]");
        m.assignment.emplace_back(pair[0], pair[1]);
      }
    }
    return m;
  }
  throw Error(ErrorCode::ParseError, "unknown move type \"" + type + "\"");
}

inline json to_json(const MoveSequence& seq) {
  json moves = json::array();
  for (const Move& m : seq.moves) moves.push_back(to_json(m));
  return {{"start", to_json(seq.start)}, {"moves", moves}};
}

inline MoveSequence sequence_from_json(const json& j) {
  MoveSequence seq;
  if (j.is_object() && j.contains("start")) seq.start = graph_from_json(j.at("start"));
  const json moves = j.is_array() ? j : detail::get<json>(j, "moves", "move sequence");
  if (!moves.is_array()) throw Error(ErrorCode::ParseError, "moves must be an array");
  for (const json& m : moves) seq.moves.push_back(move_from_json(m));
  return seq;
}

// --------------------------------------------------------------- reports

inline json to_json(const RigidityReport& r) {
  json flexes = json::array();
  for (const Vector& u : r.flex_basis) flexes.push_back(detail::from_vector(u));
  json nontrivial = json::array();
  for (const Vector& u : r.nontrivial_flexes) nontrivial.push_back(detail::from_vector(u));
  return {{"matrix_rows", r.matrix_rows},
          {"matrix_cols", r.matrix_cols},
          {"rank", r.rank},
          {"nullity", r.nullity},
          {"trivial_dim", r.trivial_dim},
          {"is_rigid", r.is_rigid},
          {"is_minimal", r.is_minimal},
          {"singular_values", r.singular_values},
          {"tolerance_used", r.tolerance_used},
          {"rank_stable", r.rank_stable},
          {"flex_basis", flexes},
          {"nontrivial_flexes", nontrivial}};
}

inline json to_json(const Graph& g, const FrameworkColouring& c) {
  json offending = json::array();
  for (const Edge& e : c.offending_edges) offending.push_back({e.u, e.v});
  json colours = json::array();
  for (std::size_t i = 0; i < c.colours.size(); ++i) {
    const Edge& e = g.edges()[i];
    colours.push_back({{"edge", {e.u, e.v}}, {"colour", c.colours[i]}, {"margin", c.margins[i]}});
  }
  return {{"well_positioned", c.well_positioned}, {"edges", colours}, {"offending_edges", offending}};
}

inline json to_json(const TreeCriteria& c) {
  json out = {{"class_spans", c.class_spans},
              {"class_is_tree", c.class_is_tree},
              {"colours_used", c.colours_used},
              {"necessity_applicable", c.necessity_applicable},
              {"necessary_holds", c.necessary_holds},
              {"sufficient_holds", c.sufficient_holds},
              {"edge_disjoint_spanning_trees", c.edge_disjoint_spanning_trees}};
  if (c.trees) {
    json trees = json::array();
    for (const auto& tree : *c.trees) {
      json t = json::array();
      for (const Edge& e : tree) t.push_back({e.u, e.v});
      trees.push_back(t);
    }
    out["trees"] = trees;
  }
  return out;
}

inline json to_json(const Graph& g, const PolytopeAnalysis& a) {
  json out = to_json(a.report);
  out["colouring"] = to_json(g, a.colouring);
  if (a.criteria) out["criteria"] = to_json(*a.criteria);
  out["criteria_consistent"] = a.criteria_consistent;
  return out;
}

// ---------------------------------------------------------- DOT and SVG

inline const char* colour_name(int colour) {
  static const char* palette[] = {"black", "red", "blue", "darkgreen", "orange", "purple", "brown", "magenta"};
  return palette[colour >= 0 && colour < 8 ? colour : 0];
}

/// DOT export; edge colours follow framework colours when given (0 = tied).
inline std::string to_dot(const Graph& g, const std::optional<FrameworkColouring>& colouring = std::nullopt,
                          const std::optional<Placement>& placement = std::nullopt) {
  std::ostringstream out;
  out << "graph G {\n  node [shape=circle];\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << "  " << v;
    if (placement && placement->cols() >= 2) {
      out << " [pos=\"" << (*placement)(v, 0) << "," << (*placement)(v, 1) << "!\"]";
    }
    out << ";\n";
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    out << "  " << e.u << " -- " << e.v;
    if (colouring) {
      const int c = colouring->colours[i];
      out << " [color=" << colour_name(c);
      if (c == 0) out << ", style=dashed";
      out << ", label=\"" << c << "\"]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

/// Planar drawing of the first two coordinates; optional flex drawn as arrows.
inline std::string to_svg(const Framework& f, const std::optional<FrameworkColouring>& colouring = std::nullopt,
                          const std::optional<Vector>& flex = std::nullopt) {
  const Placement& p = f.placement();
  const int n = f.graph().vertex_count();
  const int d = f.dim();
  const auto coord = [&](Vertex v, int c) { return c < d ? p(v, c) : 0.0; };
  double lo_x = coord(0, 0), hi_x = lo_x, lo_y = coord(0, 1), hi_y = lo_y;
  for (int v = 0; v < n; ++v) {
    lo_x = std::min(lo_x, coord(v, 0));
    hi_x = std::max(hi_x, coord(v, 0));
    lo_y = std::min(lo_y, coord(v, 1));
    hi_y = std::max(hi_y, coord(v, 1));
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double size = 400.0, pad = 40.0;
  const auto sx = [&](double x) { return pad + (x - lo_x) / span * (size - 2 * pad); };
  const auto sy = [&](double y) { return size - pad - (y - lo_y) / span * (size - 2 * pad); };

  std::ostringstream out;
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  out << "  <defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\">"
         "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"green\"/></marker></defs>\n";
  for (std::size_t i = 0; i < f.graph().edge_count(); ++i) {
    const Edge& e = f.graph().edges()[i];
    const int c = colouring ? colouring->colours[i] : 0;
    out << "  <line x1=\"" << sx(coord(e.u, 0)) << "\" y1=\"" << sy(coord(e.u, 1)) << "\" x2=\"" << sx(coord(e.v, 0))
        << "\" y2=\"" << sy(coord(e.v, 1)) << "\" stroke=\"" << colour_name(c) << "\" stroke-width=\"2\"/>\n";
  }
  if (flex) {
    double longest = 0.0;
    for (int v = 0; v < n; ++v) longest = std::max(longest, flex->segment(static_cast<Eigen::Index>(v) * d, d).norm());
    const double arrow_scale = longest > 0 ? 0.15 * span / longest : 0.0;
    for (int v = 0; v < n; ++v) {
      const double ux = (*flex)(static_cast<Eigen::Index>(v) * d) * arrow_scale;
      const double uy = d > 1 ? (*flex)(static_cast<Eigen::Index>(v) * d + 1) * arrow_scale : 0.0;
      if (ux == 0.0 && uy == 0.0) continue;
      out << "  <line x1=\"" << sx(coord(v, 0)) << "\" y1=\"" << sy(coord(v, 1)) << "\" x2=\"" << sx(coord(v, 0) + ux)
          << "\" y2=\"" << sy(coord(v, 1) + uy) << "\" stroke=\"green\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
    }
  }
  for (int v = 0; v < n; ++v) {
    out << "  <circle cx=\"" << sx(coord(v, 0)) << "\" cy=\"" << sy(coord(v, 1)) << "\" r=\"5\" fill=\"white\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << sx(coord(v, 0)) + 7 << "\" y=\"" << sy(coord(v, 1)) - 7 << "\" font-size=\"12\">" << v << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace rigidkit::io
