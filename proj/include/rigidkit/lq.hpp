#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rigidkit/error.hpp"
#include "rigidkit/framework.hpp"
#include "rigidkit/graph.hpp"
#include "rigidkit/linalg.hpp"
#include "rigidkit/random.hpp"

namespace rigidkit {

/// Componentwise sgn(a_i) |a_i|^k.
inline Vector signed_power(const Vector& a, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidParameters, "signed_power needs k > 0");
  Vector out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = a(i);
    out(i) = x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), k), x);
  }
  return out;
}

inline double lq_length(const Vector& a, double q) {
  if (q < 1.0) throw Error(ErrorCode::InvalidParameters, "lq_length needs q >= 1");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) sum += std::pow(std::abs(a(i)), q);
  return std::pow(sum, 1.0 / q);
}

namespace detail {
inline const LqNorm& require_lq(const Framework& f) {
  const auto* lq = std::get_if<LqNorm>(&f.norm());
  if (!lq) throw Error(ErrorCode::InvalidNorm, "framework does not use an l^q norm");
  return *lq;
}
}  // namespace detail

/// |E| x nd matrix; the row of edge (u,v) holds (p_u - p_v)^(q-1) in u's
/// block and its negative in v's block. Rows follow canonical edge order.
inline Matrix rigidity_matrix_lq(const Framework& f) {
  const double q = detail::require_lq(f).q();
  const int d = f.dim();
  const auto& edges = f.graph().edges();
  Matrix r = Matrix::Zero(static_cast<Eigen::Index>(edges.size()),
                          static_cast<Eigen::Index>(f.graph().vertex_count()) * d);
  for (std::size_t row = 0; row < edges.size(); ++row) {
    const Edge& e = edges[row];
    const Vector g = signed_power(f.edge_vector(e), q - 1.0);
    r.block(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(e.u) * d, 1, d) = g.transpose();
    r.block(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(e.v) * d, 1, d) = -g.transpose();
  }
  return r;
}

inline RigidityReport analyze(const Framework& f, const TolerancePolicy& policy = {}) {
  return detail::report_from_matrix(rigidity_matrix_lq(f), f.graph().vertex_count(), f.dim(), policy);
}

enum class FlexClass { Trivial, NonTrivial, NotAFlex };

inline std::string_view to_string(FlexClass c) {
  switch (c) {
    case FlexClass::Trivial: return "trivial";
    case FlexClass::NonTrivial: return "nontrivial";
    case FlexClass::NotAFlex: return "not-a-flex";
  }
  return "?";
}

/// Tolerances for classify_flex, relative to ||u|| (and ||R|| for the residual).
struct FlexTolerance {
  double residual = 1e-9;
  double translation = 1e-9;
};

namespace detail {
inline FlexClass classify_against(const Matrix& r, const Vector& u, int n, int d, FlexTolerance tol) {
  if (u.size() != static_cast<Eigen::Index>(n) * d) {
    throw Error(ErrorCode::DimensionMismatch,
                "flex has " + std::to_string(u.size()) + " entries, expected " + std::to_string(n * d));
  }
  const double norm_u = u.norm();
  if (norm_u == 0.0) return FlexClass::Trivial;
  const double scale = r.size() > 0 ? std::max(1.0, r.norm()) : 1.0;
  if ((r * u).norm() > tol.residual * scale * norm_u) return FlexClass::NotAFlex;
  if (remove_translation(u, n, d).norm() <= tol.translation * norm_u) return FlexClass::Trivial;
  return FlexClass::NonTrivial;
}
}  // namespace detail

inline FlexClass classify_flex(const Framework& f, const Vector& u, FlexTolerance tol = {}) {
  return detail::classify_against(rigidity_matrix_lq(f), u, f.graph().vertex_count(), f.dim(), tol);
}

struct SampledPlacement {
  Placement placement;
  long achieved_rank = 0;
  bool stable = true;
};

/// Uniform sample from [-1,1]^{nd} for trial `trial` of `seed`.
inline Placement random_placement(int n, int d, std::uint64_t seed, std::uint64_t trial) {
  Rng rng(derive_seed(seed, trial));
  Placement p(n, d);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < d; ++c) p(v, c) = rng.uniform(-1.0, 1.0);
  return p;
}

/// Best of `trials` uniform placements, preferring placements whose rank is
/// stable under a 10x tolerance change; earliest trial wins ties.
inline SampledPlacement sample_regular_placement(const Graph& g, const LqNorm& norm, int d, std::uint64_t seed,
                                                 int trials, const TolerancePolicy& policy = {}) {
  if (trials < 1) throw Error(ErrorCode::InvalidParameters, "trials must be >= 1");
  std::optional<SampledPlacement> best;
  for (int t = 0; t < trials; ++t) {
    Placement p = random_placement(g.vertex_count(), d, seed, static_cast<std::uint64_t>(t));
    std::optional<Framework> f;
    try {
      f = Framework::make(g, p, norm);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CoincidentEndpoints) continue;
      throw;
    }
    const RankResult r = numerical_rank(rigidity_matrix_lq(*f), policy);
    const bool better = !best || (r.stable && !best->stable) ||
                        (r.stable == best->stable && r.rank > best->achieved_rank);
    if (better) best = SampledPlacement{std::move(p), r.rank, r.stable};
  }
  if (!best) throw Error(ErrorCode::CoincidentEndpoints, "every sampled placement had a zero-length edge");
  return *best;
}

/// Length of a under the framework's norm (l^q or polytopic).
inline double norm_length(const NormSpec& norm, const Vector& a) {
  if (const auto* lq = std::get_if<LqNorm>(&norm)) return lq_length(a, lq->q());
  const auto& poly = std::get<PolytopeNorm>(norm);
  double best = 0.0;
  for (const Vector& b : poly.facets()) best = std::max(best, std::abs(a.dot(b)));
  return best;
}

struct EdgeDeviation {
  Edge edge;
  /// |len_t - len_0| per grid point.
  std::vector<double> deviation;
};

/// Edge-length deviations |‖(p_i+tu_i)-(p_j+tu_j)‖ - ‖p_i-p_j‖| along t_grid.
inline std::vector<EdgeDeviation> finite_difference_flex_check(const Framework& f, const Vector& u,
                                                               const std::vector<double>& t_grid) {
  const int d = f.dim();
  if (u.size() != static_cast<Eigen::Index>(f.graph().vertex_count()) * d) {
    throw Error(ErrorCode::DimensionMismatch, "flex length does not match n*d");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] < t_grid[i - 1]))) {
      throw Error(ErrorCode::InvalidParameters, "t_grid must be positive and strictly decreasing");
    }
  }
  std::vector<EdgeDeviation> table;
  for (const Edge& e : f.graph().edges()) {
    const Vector a = f.edge_vector(e);
    const Vector w = u.segment(static_cast<Eigen::Index>(e.u) * d, d) - u.segment(static_cast<Eigen::Index>(e.v) * d, d);
    const double base = norm_length(f.norm(), a);
    EdgeDeviation row{e, {}};
    for (double t : t_grid) row.deviation.push_back(std::abs(norm_length(f.norm(), a + t * w) - base));
    table.push_back(std::move(row));
  }
  return table;
}

/// Coordinate map x -> (s_0 x_{perm[0]}, ..., s_{d-1} x_{perm[d-1]}) + shift.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  static SignedPermutation identity(int d) {
    SignedPermutation s;
    for (int i = 0; i < d; ++i) {
      s.perm.push_back(i);
      s.signs.push_back(1);
    }
    return s;
  }

  /// Reads a d x d matrix; throws NotSignedPermutation unless every row and
  /// column has exactly one entry, equal to +-1.
  static SignedPermutation from_matrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::NotSignedPermutation, "matrix is not square");
    SignedPermutation s;
    std::vector<int> used(static_cast<std::size_t>(m.cols()), 0);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      int col = -1;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double x = m(r, c);
        if (x == 0.0) continue;
        if ((x != 1.0 && x != -1.0) || col >= 0) throw Error(ErrorCode::NotSignedPermutation, "bad row " + std::to_string(r));
        col = static_cast<int>(c);
      }
      if (col < 0 || used[static_cast<std::size_t>(col)]++) throw Error(ErrorCode::NotSignedPermutation, "bad row " + std::to_string(r));
      s.perm.push_back(col);
      s.signs.push_back(m(r, col) > 0 ? 1 : -1);
    }
    return s;
  }

  void validate(int d) const {
    if (perm.size() != static_cast<std::size_t>(d) || signs.size() != perm.size()) {
      throw Error(ErrorCode::NotSignedPermutation, "map dimension does not match the placement");
    }
    std::vector<int> seen(perm.size(), 0);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (perm[i] < 0 || perm[i] >= d || seen[static_cast<std::size_t>(perm[i])]++)
        throw Error(ErrorCode::NotSignedPermutation, "not a permutation");
      if (signs[i] != 1 && signs[i] != -1) throw Error(ErrorCode::NotSignedPermutation, "signs must be +-1");
    }
  }
};

/// Image of the framework under a signed permutation of coordinates followed
/// by an optional translation. These are the linear isometries of l^q (q != 2).
inline Framework apply_linear_isometry(const Framework& f, const SignedPermutation& map,
                                       const std::optional<Vector>& shift = std::nullopt) {
  const int d = f.dim();
  map.validate(d);
  if (shift && shift->size() != d) throw Error(ErrorCode::DimensionMismatch, "translation has wrong dimension");
  Placement p(f.placement().rows(), d);
  for (Eigen::Index v = 0; v < p.rows(); ++v) {
    for (int c = 0; c < d; ++c) {
      p(v, c) = map.signs[static_cast<std::size_t>(c)] * f.placement()(v, map.perm[static_cast<std::size_t>(c)]);
      if (shift) p(v, c) += (*shift)(c);
    }
  }
  return f.with_placement(std::move(p));
}

}  // namespace rigidkit
