#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace rigidkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular-value threshold policy. The default threshold is
/// max(rows, cols) * sigma_max * 2^-40; `absolute` overrides it outright.
struct TolerancePolicy {
  double relative = 0x1p-40;
  std::optional<double> absolute;

  double threshold(double sigma_max, Eigen::Index rows, Eigen::Index cols) const {
    if (absolute) return *absolute;
    return static_cast<double>(std::max(rows, cols)) * sigma_max * relative;
  }
};

struct RankResult {
  long rank = 0;
  std::vector<double> singular_values;  // descending
  double tolerance = 0.0;
  /// Rank agrees at tolerance and 10x tolerance.
  bool stable = true;
};

namespace detail {
inline long count_above(const std::vector<double>& sv, double tau) {
  return static_cast<long>(std::count_if(sv.begin(), sv.end(), [tau](double s) { return s > tau; }));
}
}  // namespace detail

struct SvdAnalysis {
  RankResult rank;
  /// Orthonormal basis of the numerical nullspace, one column per vector.
  Matrix nullspace;
};

/// SVD-based rank plus nullspace basis of m.
inline SvdAnalysis analyze_svd(const Matrix& m, const TolerancePolicy& policy = {}) {
  SvdAnalysis out;
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) {
    out.rank.tolerance = policy.threshold(0.0, m.rows(), cols);
    out.nullspace = Matrix::Identity(cols, cols);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  out.rank.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double tau = policy.threshold(sigma_max, m.rows(), cols);
  out.rank.tolerance = tau;
  out.rank.rank = detail::count_above(out.rank.singular_values, tau);
  out.rank.stable = detail::count_above(out.rank.singular_values, 10.0 * tau) == out.rank.rank;
  out.nullspace = svd.matrixV().rightCols(cols - out.rank.rank);
  return out;
}

inline RankResult numerical_rank(const Matrix& m, const TolerancePolicy& policy = {}) {
  if (m.rows() == 0 || m.cols() == 0) {
    RankResult r;
    r.tolerance = policy.threshold(0.0, m.rows(), m.cols());
    return r;
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  RankResult r;
  r.singular_values.assign(sv.data(), sv.data() + sv.size());
  r.tolerance = policy.threshold(sv.size() > 0 ? sv(0) : 0.0, m.rows(), m.cols());
  r.rank = detail::count_above(r.singular_values, r.tolerance);
  r.stable = detail::count_above(r.singular_values, 10.0 * r.tolerance) == r.rank;
  return r;
}

}  // namespace rigidkit
