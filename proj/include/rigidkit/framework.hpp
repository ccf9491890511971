#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "rigidkit/error.hpp"
#include "rigidkit/graph.hpp"
#include "rigidkit/linalg.hpp"

namespace rigidkit {

/// The l^q norm for 1 < q < inf, q != 2. The endpoints are polytopic norms
/// and q = 2 carries rotations, so all three are refused here.
class LqNorm {
 public:
  static LqNorm make(double q) {
    if (!std::isfinite(q) || q <= 1.0) {
      throw Error(ErrorCode::InvalidNorm,
                  "l^q needs 1 < q < inf (q = 1 and q = inf are handled as polytopic norms), got " +
                      std::to_string(q));
    }
    if (q == 2.0) {
      throw Error(ErrorCode::EuclideanNorm, "q = 2 is Euclidean: trivial flexes include rotations");
    }
    return LqNorm(q);
  }

  double q() const { return q_; }

 private:
  explicit LqNorm(double q) : q_(q) {}
  double q_;
};

/// Norm ||a|| = max_k |a . b_k| for a spanning family of distinct nonzero
/// facet vectors b_1..b_s.
class PolytopeNorm {
 public:
  static PolytopeNorm make(std::vector<Vector> facets) {
    if (facets.empty()) throw Error(ErrorCode::InvalidNorm, "polytope needs at least one facet");
    const Eigen::Index d = facets.front().size();
    if (d < 1) throw Error(ErrorCode::InvalidNorm, "facet vectors must be nonempty");
    Matrix stacked(static_cast<Eigen::Index>(facets.size()), d);
    for (std::size_t k = 0; k < facets.size(); ++k) {
      const Vector& b = facets[k];
      if (b.size() != d) throw Error(ErrorCode::InvalidNorm, "facet vectors differ in dimension");
      if (!b.allFinite() || b.isZero(0.0)) throw Error(ErrorCode::InvalidNorm, "facet vectors must be finite and nonzero");
      for (std::size_t j = 0; j < k; ++j) {
        if (facets[j] == b) throw Error(ErrorCode::InvalidNorm, "duplicate facet vector");
        if (facets[j] == -b) throw Error(ErrorCode::InvalidNorm, "antipodal facet vectors always tie");
      }
      stacked.row(static_cast<Eigen::Index>(k)) = b.transpose();
    }
    if (numerical_rank(stacked).rank != d) throw Error(ErrorCode::InvalidNorm, "facet vectors do not span R^d");
    return PolytopeNorm(std::move(facets));
  }

  /// Standard basis facets: the max norm.
  static PolytopeNorm linf(int d) {
    std::vector<Vector> facets;
    for (int i = 0; i < d; ++i) facets.push_back(Vector::Unit(d, i));
    return make(std::move(facets));
  }

  /// All sign vectors with leading +1, so that ||a|| = sum_i |a_i|.
  static PolytopeNorm l1(int d) {
    std::vector<Vector> facets;
    for (long mask = 0; mask < (1L << (d - 1)); ++mask) {
      Vector b = Vector::Ones(d);
      for (int i = 1; i < d; ++i)
        if (mask & (1L << (i - 1))) b(i) = -1.0;
      facets.push_back(b);
    }
    return make(std::move(facets));
  }

  int dim() const { return static_cast<int>(facets_.front().size()); }
  std::size_t facet_count() const { return facets_.size(); }
  const std::vector<Vector>& facets() const { return facets_; }
  const Vector& facet(std::size_t k) const { return facets_.at(k); }

 private:
  explicit PolytopeNorm(std::vector<Vector> facets) : facets_(std::move(facets)) {}
  std::vector<Vector> facets_;
};

using NormSpec = std::variant<LqNorm, PolytopeNorm>;

/// q in [1, inf]: q = 1 and q = inf become the matching polytopic norms.
inline NormSpec norm_from_q(double q, int d) {
  if (q == 1.0) return PolytopeNorm::l1(d);
  if (std::isinf(q) && q > 0) return PolytopeNorm::linf(d);
  return LqNorm::make(q);
}

/// One row per vertex, one column per ambient coordinate.
using Placement = Matrix;

/// Graph + placement + norm, validated: sizes agree, coordinates are finite
/// and no edge has coincident endpoints.
class Framework {
 public:
  static Framework make(Graph graph, Placement placement, NormSpec norm) {
    if (placement.rows() != graph.vertex_count()) {
      throw Error(ErrorCode::DimensionMismatch, "placement has " + std::to_string(placement.rows()) +
                                                    " points for " + std::to_string(graph.vertex_count()) +
                                                    " vertices");
    }
    if (placement.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "ambient dimension must be >= 1");
    if (const auto* poly = std::get_if<PolytopeNorm>(&norm); poly && poly->dim() != placement.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "facet dimension differs from placement dimension");
    }
    if (!placement.allFinite()) throw Error(ErrorCode::InvalidParameters, "placement has non-finite coordinates");
    for (const Edge& e : graph.edges()) {
      if (placement.row(e.u) == placement.row(e.v)) {
        throw Error(ErrorCode::CoincidentEndpoints, "edge " + to_string(e) + " has coincident endpoints");
      }
    }
    return Framework(std::move(graph), std::move(placement), std::move(norm));
  }

  const Graph& graph() const { return graph_; }
  const Placement& placement() const { return placement_; }
  const NormSpec& norm() const { return norm_; }
  int dim() const { return static_cast<int>(placement_.cols()); }
  Vector point(Vertex v) const { return placement_.row(v).transpose(); }
  Vector edge_vector(const Edge& e) const { return point(e.u) - point(e.v); }

  Framework with_graph(Graph g) const { return make(std::move(g), placement_, norm_); }
  Framework with_placement(Placement p) const { return make(graph_, std::move(p), norm_); }

 private:
  Framework(Graph g, Placement p, NormSpec n) : graph_(std::move(g)), placement_(std::move(p)), norm_(std::move(n)) {}

  Graph graph_;
  Placement placement_;
  NormSpec norm_;
};

/// Outcome of a rigidity analysis; shared by the l^q and polytopic paths.
struct RigidityReport {
  long matrix_rows = 0;
  long matrix_cols = 0;
  long rank = 0;
  long nullity = 0;
  /// Orthonormal basis of the numerical kernel (translations included).
  std::vector<Vector> flex_basis;
  /// Orthonormal basis of the kernel with translations projected out.
  std::vector<Vector> nontrivial_flexes;
  long trivial_dim = 0;
  bool is_rigid = false;
  bool is_minimal = false;
  std::vector<double> singular_values;
  double tolerance_used = 0.0;
  bool rank_stable = true;
};

/// d orthonormal translation vectors (e,e,...,e) in R^{nd}.
inline Matrix translation_basis(int n, int d) {
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(n) * d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < d; ++c) t(static_cast<Eigen::Index>(v) * d + c, c) = scale;
  return t;
}

/// Component of u orthogonal to every translation.
inline Vector remove_translation(const Vector& u, int n, int d) {
  const Matrix t = translation_basis(n, d);
  return u - t * (t.transpose() * u);
}

namespace detail {

inline RigidityReport report_from_matrix(const Matrix& r, int n, int d, const TolerancePolicy& policy) {
  RigidityReport report;
  report.matrix_rows = r.rows();
  report.matrix_cols = r.cols();
  const SvdAnalysis svd = analyze_svd(r, policy);
  report.rank = svd.rank.rank;
  report.nullity = report.matrix_cols - report.rank;
  report.singular_values = svd.rank.singular_values;
  report.tolerance_used = svd.rank.tolerance;
  report.rank_stable = svd.rank.stable;
  report.trivial_dim = d;
  for (Eigen::Index c = 0; c < svd.nullspace.cols(); ++c) report.flex_basis.push_back(svd.nullspace.col(c));

  // Nontrivial part: project the kernel off the translations, then take an
  // orthonormal basis of what remains.
  if (svd.nullspace.cols() > 0) {
    const Matrix t = translation_basis(n, d);
    const Matrix residual = svd.nullspace - t * (t.transpose() * svd.nullspace);
    // Kernel columns are orthonormal, so residual singular values sit near 1
    // (nontrivial directions) or near 0 (translations).
    Eigen::JacobiSVD<Matrix> basis(residual, Eigen::ComputeThinU);
    const Vector& sv = basis.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-6) report.nontrivial_flexes.push_back(basis.matrixU().col(i));
  }

  report.is_rigid = report.rank == static_cast<long>(n) * d - d;
  report.is_minimal = report.is_rigid && report.rank == report.matrix_rows;
  return report;
}

}  // namespace detail

}  // namespace rigidkit
