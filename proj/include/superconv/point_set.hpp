#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace superconv {

// Scattered nodes in [0,1]^d, one point per row. Immutable after construction.
class PointSet {
 public:
  PointSet() = default;

  /// Wraps an n x d coordinate matrix. Coordinates must lie in [0,1] and
  /// points must be pairwise distinct unless `trusted` is set (grids built by
  /// the factories below are distinct by construction and skip the O(n^2)
  /// scan).
  explicit PointSet(Eigen::MatrixXd pts, bool trusted = false) : pts_(std::move(pts)) {
    if (pts_.cols() < 1 || pts_.cols() > 2) throw std::invalid_argument("PointSet: dimension must be 1 or 2");
    if ((pts_.array() < -1e-15).any() || (pts_.array() > 1.0 + 1e-15).any())
      throw std::invalid_argument("PointSet: coordinates must lie in [0,1]");
    if (!trusted) check_distinct();
  }

  /// 1D convenience constructor.
  static PointSet line(std::initializer_list<double> xs) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs) m(i++, 0) = x;
    return PointSet(std::move(m));
  }

  static PointSet line(const std::vector<double>& xs) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, 0) = xs[static_cast<std::size_t>(i)];
    return PointSet(std::move(m));
  }

  int dim() const { return static_cast<int>(pts_.cols()); }
  int size() const { return static_cast<int>(pts_.rows()); }
  bool empty() const { return pts_.rows() == 0; }
  const Eigen::MatrixXd& coords() const { return pts_; }
  auto row(Eigen::Index i) const { return pts_.row(i); }

  double min_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < pts_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < pts_.rows(); ++j)
        best = std::min(best, (pts_.row(i) - pts_.row(j)).norm());
    return best;
  }

 private:
  void check_distinct() const {
    for (Eigen::Index i = 0; i < pts_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < pts_.rows(); ++j)
        if ((pts_.row(i) - pts_.row(j)).norm() == 0.0)
          throw std::invalid_argument("PointSet: points must be pairwise distinct");
  }

  Eigen::MatrixXd pts_;
};

/// Equally spaced nodes on [0,1]^d. Interior: {i/(n+1), i=1..n} per axis;
/// with boundary: {i/(n-1), i=0..n-1}. For d=2 the 1D set is tensorized, so
/// the result has n_per_dim^2 points.
inline PointSet equispaced_interior(int n_per_dim, int d, bool include_boundary = false) {
  if (n_per_dim < 1) throw std::invalid_argument("equispaced_interior: n_per_dim must be >= 1");
  if (include_boundary && n_per_dim < 2)
    throw std::invalid_argument("equispaced_interior: boundary grids need n_per_dim >= 2");
  if (d != 1 && d != 2) throw std::invalid_argument("equispaced_interior: d must be 1 or 2");

  std::vector<double> axis(static_cast<std::size_t>(n_per_dim));
  for (int i = 0; i < n_per_dim; ++i)
    axis[static_cast<std::size_t>(i)] =
        include_boundary ? static_cast<double>(i) / (n_per_dim - 1) : static_cast<double>(i + 1) / (n_per_dim + 1);

  if (d == 1) {
    Eigen::MatrixXd m(n_per_dim, 1);
    for (int i = 0; i < n_per_dim; ++i) m(i, 0) = axis[static_cast<std::size_t>(i)];
    return PointSet(std::move(m), /*trusted=*/true);
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n_per_dim) * n_per_dim, 2);
  Eigen::Index r = 0;
  for (int i = 0; i < n_per_dim; ++i)
    for (int j = 0; j < n_per_dim; ++j, ++r) {
      m(r, 0) = axis[static_cast<std::size_t>(i)];
      m(r, 1) = axis[static_cast<std::size_t>(j)];
    }
  return PointSet(std::move(m), /*trusted=*/true);
}

/// Grid approximation of the fill distance: the largest distance from any
/// candidate point to its nearest node. Exact up to the candidate spacing.
inline double fill_distance(const PointSet& X, const PointSet& candidates) {
  if (X.empty()) throw std::invalid_argument("fill_distance: empty node set");
  if (X.dim() != candidates.dim()) throw std::invalid_argument("fill_distance: dimension mismatch");
  const Eigen::MatrixXd& nodes = X.coords();
  double h = 0.0;
  for (Eigen::Index c = 0; c < candidates.coords().rows(); ++c) {
    const double d2 = (nodes.rowwise() - candidates.coords().row(c)).rowwise().squaredNorm().minCoeff();
    h = std::max(h, d2);
  }
  return std::sqrt(h);
}

}  // namespace superconv
