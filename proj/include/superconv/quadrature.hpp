#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace superconv {

// Quadrature rule on [0,1]: strictly increasing nodes, positive weights
// summing to the interval length.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  void validate() const {
    if (nodes.size() != weights.size()) throw std::invalid_argument("QuadratureRule: nodes/weights mismatch");
    for (Eigen::Index i = 0; i + 1 < nodes.size(); ++i)
      if (nodes(i + 1) <= nodes(i)) throw std::invalid_argument("QuadratureRule: nodes must be strictly increasing");
    if ((weights.array() <= 0).any()) throw std::invalid_argument("QuadratureRule: weights must be positive");
    if (std::abs(weights.sum() - 1.0) > 1e-12) throw std::invalid_argument("QuadratureRule: weights must sum to 1");
  }
};

namespace detail {

/// Gauss-Legendre nodes and weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre_reference(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

}  // namespace detail

/// Composite Gauss-Legendre rule on [0,1] with `panels` uniform panels and
/// `nodes_per_panel` nodes each. Points listed in `splits` become additional
/// panel boundaries so integrands with kinks there stay panelwise smooth.
inline QuadratureRule composite_gauss_legendre(int panels, int nodes_per_panel,
                                               const std::vector<double>& splits = {}) {
  if (panels < 1 || nodes_per_panel < 1)
    throw std::invalid_argument("composite_gauss_legendre: need panels >= 1 and nodes_per_panel >= 1");

  std::vector<double> bounds;
  for (int i = 0; i <= panels; ++i) bounds.push_back(static_cast<double>(i) / panels);
  for (double s : splits)
    if (s > 0.0 && s < 1.0) bounds.push_back(s);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               bounds.end());

  std::vector<double> ref_nodes, ref_weights;
  detail::gauss_legendre_reference(nodes_per_panel, ref_nodes, ref_weights);

  const std::size_t cells = bounds.size() - 1;
  QuadratureRule rule;
  rule.nodes.resize(static_cast<Eigen::Index>(cells) * nodes_per_panel);
  rule.weights.resize(rule.nodes.size());
  Eigen::Index k = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double a = bounds[c], b = bounds[c + 1];
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int j = 0; j < nodes_per_panel; ++j, ++k) {
      rule.nodes(k) = mid + hw * ref_nodes[static_cast<std::size_t>(j)];
      rule.weights(k) = hw * ref_weights[static_cast<std::size_t>(j)];
    }
  }
  return rule;
}

// Panel structure from which concrete rules are instantiated. Integrands with
// a derivative kink (all |x-y|-type kernels on the diagonal) get the kink
// location as an extra panel boundary.
struct QuadratureScheme {
  int panels = 64;
  int nodes_per_panel = 8;

  QuadratureRule plain() const { return composite_gauss_legendre(panels, nodes_per_panel); }
  QuadratureRule with_splits(const std::vector<double>& splits) const {
    return composite_gauss_legendre(panels, nodes_per_panel, splits);
  }
};

}  // namespace superconv
