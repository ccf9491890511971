#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the Graph container.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "rigidkit/graph.hpp"

namespace oracle {

/// (k,l)-sparsity by counting induced edges of every vertex subset.
struct Counts {
  bool sparse = true;
  bool tight = false;
};

inline Counts sparsity(const rigidkit::Graph& g, int k, int l) {
  const int n = g.vertex_count();
  Counts out;
  for (long subset = 1; subset < (1L << n); ++subset) {
    std::vector<bool> in(static_cast<std::size_t>(n));
    int size = 0;
    for (int v = 0; v < n; ++v) {
      in[static_cast<std::size_t>(v)] = (subset >> v) & 1;
      size += in[static_cast<std::size_t>(v)];
    }
    int edges = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (in[static_cast<std::size_t>(u)] && in[static_cast<std::size_t>(v)] && g.has_edge(u, v)) ++edges;
    if (edges > 0 && edges > k * size - l) out.sparse = false;
  }
  out.tight = out.sparse && static_cast<long>(g.edge_count()) == static_cast<long>(k) * n - l;
  return out;
}

/// Graph isomorphism by trying every vertex permutation; fine for n <= 8.
inline bool isomorphic(const rigidkit::Graph& a, const rigidkit::Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> perm(static_cast<std::size_t>(a.vertex_count()));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool same = true;
    for (const rigidkit::Edge& e : a.edges()) {
      if (!b.has_edge(perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)])) {
        same = false;
        break;
      }
    }
    if (same) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline double lq_length(const Eigen::VectorXd& a, double q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::pow(std::abs(a(i)), q);
  return std::pow(s, 1.0 / q);
}

/// Central-difference gradient of the l^q length at a.
inline Eigen::VectorXd lq_gradient(const Eigen::VectorXd& a, double q, double h = 1e-6) {
  Eigen::VectorXd g(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    Eigen::VectorXd plus = a, minus = a;
    plus(i) += h;
    minus(i) -= h;
    g(i) = (lq_length(plus, q) - lq_length(minus, q)) / (2 * h);
  }
  return g;
}

/// Rank by Gaussian elimination with partial pivoting and an absolute cutoff.
inline long gauss_rank(Eigen::MatrixXd m, double cutoff = 1e-9) {
  long rank = 0;
  for (Eigen::Index col = 0; col < m.cols() && rank < m.rows(); ++col) {
    Eigen::Index pivot = rank;
    for (Eigen::Index r = rank; r < m.rows(); ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (std::abs(m(pivot, col)) <= cutoff) continue;
    m.row(pivot).swap(m.row(rank));
    for (Eigen::Index r = rank + 1; r < m.rows(); ++r) m.row(r) -= m(r, col) / m(rank, col) * m.row(rank);
    ++rank;
  }
  return rank;
}

}  // namespace oracle
