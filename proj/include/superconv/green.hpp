#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "superconv/green_w22.hpp"
#include "superconv/kernels.hpp"
#include "superconv/quadrature.hpp"

namespace superconv {

// Linear combination of derivative orders evaluated at one endpoint,
// sum_k coef_k u^(k)(endpoint) = 0.
struct BoundaryOperator {
  int endpoint;  // 0 or 1
  std::vector<std::pair<int, double>> terms;
};

// Two-point boundary value problem on (0,1). ode_coeffs[k] multiplies u^(k).
struct BVPSpec {
  int order = 2;
  std::vector<double> ode_coeffs;
  std::vector<BoundaryOperator> bcs;

  void validate() const {
    if (order != 2 && order != 4) throw std::invalid_argument("BVPSpec: order must be 2 or 4");
    if (bcs.size() != static_cast<std::size_t>(order))
      throw std::invalid_argument("BVPSpec: number of boundary conditions must equal the order");
  }
};

/// -u'' + u with Neumann conditions u'(0) = u'(1) = 0.
inline BVPSpec bvp_w21_standard() {
  return {2, {1.0, 0.0, -1.0}, {{0, {{1, 1.0}}}, {1, {{1, 1.0}}}}};
}

/// -u'' + u with Robin conditions u'(0) - u(0) = 0 and u'(1) + u(1) = 0.
inline BVPSpec bvp_w21_matern() {
  return {2, {1.0, 0.0, -1.0}, {{0, {{1, 1.0}, {0, -1.0}}}, {1, {{1, 1.0}, {0, 1.0}}}}};
}

/// u'''' - u'' + u with u'' = 0 and u''' - u' = 0 at both endpoints.
inline BVPSpec bvp_w22() {
  return {4,
          {1.0, 0.0, -1.0, 0.0, 1.0},
          {{0, {{2, 1.0}}}, {0, {{3, 1.0}, {1, -1.0}}}, {1, {{2, 1.0}}}, {1, {{3, 1.0}, {1, -1.0}}}}};
}

/// Quadrature discretization of (Tf)(x) = int k(x,y) f(y) dy with f sampled
/// at the rule nodes.
inline double apply_T(const KernelSpec& spec, const Eigen::VectorXd& f_at_nodes, const QuadratureRule& rule,
                      double x) {
  if (f_at_nodes.size() != rule.nodes.size()) throw std::invalid_argument("apply_T: f samples must match rule nodes");
  Eigen::Matrix<double, 1, 1> px;
  px(0) = x;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) {
    Eigen::Matrix<double, 1, 1> py;
    py(0) = rule.nodes(j);
    acc += rule.weights(j) * eval_kernel(spec, px, py) * f_at_nodes(j);
  }
  return acc;
}

namespace detail {

/// Finite-difference weights at given offsets (in units of the spacing) that
/// reproduce the `deriv`-th derivative at offset 0 exactly on polynomials of
/// degree < #offsets. Divide by spacing^deriv when applying.
inline Eigen::VectorXd fd_weights(const std::vector<double>& offsets, int deriv) {
  const int n = static_cast<int>(offsets.size());
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  double fact = 1.0;
  for (int m = 0; m < n; ++m) {
    if (m > 0) fact *= m;
    for (int j = 0; j < n; ++j) V(m, j) = std::pow(offsets[static_cast<std::size_t>(j)], m);
    if (m == deriv) rhs(m) = fact;
  }
  return V.fullPivLu().solve(rhs);
}

inline double stencil_apply(const Eigen::VectorXd& u, Eigen::Index center, const Eigen::VectorXd& w, int first_offset,
                            double spacing, int deriv) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) acc += w(j) * u(center + first_offset + j);
  return acc / std::pow(spacing, deriv);
}

/// k-th derivative of a scalar function by a centered 5-point stencil,
/// shifted inward when the stencil would leave [0,1].
inline double numeric_derivative(const std::function<double(double)>& fn, double t, int deriv, double h) {
  const int npts = 5, half = 2;
  double base = t - half * h;
  if (base < 0.0) base = 0.0;
  if (base + (npts - 1) * h > 1.0) base = 1.0 - (npts - 1) * h;
  std::vector<double> offsets(npts);
  for (int j = 0; j < npts; ++j) offsets[static_cast<std::size_t>(j)] = (base + j * h - t) / h;
  const Eigen::VectorXd w = fd_weights(offsets, deriv);
  double acc = 0.0;
  for (int j = 0; j < npts; ++j) acc += w(j) * fn(base + j * h);
  return acc / std::pow(h, deriv);
}

}  // namespace detail

struct GreenResidual {
  double interior;
  double boundary;
};

/// Checks that u = Tf solves the BVP: applies the differential operator to
/// the quadrature solution by finite differences and reports the interior
/// sup-residual (at least 5 grid cells from the endpoints) and the largest
/// boundary-operator residual.
///
/// The grid spacing is 1/4096 for second-order problems. Fourth derivatives
/// at that spacing drown in round-off (eps / h^4 is O(1)), so fourth-order
/// problems use 1/128, where the floor sits near 1e-5.
inline GreenResidual green_residual(const KernelSpec& spec, const BVPSpec& bvp,
                                    const std::function<double(double)>& f,
                                    const QuadratureScheme& scheme = {}) {
  bvp.validate();
  const int N = bvp.order <= 2 ? 4096 : 128;
  const double h = 1.0 / N;

  Eigen::VectorXd u(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double x = static_cast<double>(i) / N;
    const QuadratureRule rule = scheme.with_splits({x});
    Eigen::VectorXd fs(rule.nodes.size());
    for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) fs(j) = f(rule.nodes(j));
    u(i) = apply_T(spec, fs, rule, x);
  }

  // Central stencils per derivative order: 5 points through order 2,
  // 7 points for orders 3 and 4.
  std::vector<Eigen::VectorXd> central(bvp.ode_coeffs.size());
  std::vector<int> first(bvp.ode_coeffs.size(), 0);
  int reach = 0;
  for (std::size_t k = 1; k < bvp.ode_coeffs.size(); ++k) {
    if (bvp.ode_coeffs[k] == 0.0) continue;
    const int half = (k <= 2) ? 2 : 3;
    std::vector<double> offsets;
    for (int j = -half; j <= half; ++j) offsets.push_back(j);
    central[k] = detail::fd_weights(offsets, static_cast<int>(k));
    first[k] = -half;
    reach = std::max(reach, half);
  }

  const int margin = std::max(5, reach);
  double interior = 0.0;
  for (int i = margin; i <= N - margin; ++i) {
    double Du = bvp.ode_coeffs[0] * u(i);
    for (std::size_t k = 1; k < bvp.ode_coeffs.size(); ++k) {
      if (bvp.ode_coeffs[k] == 0.0) continue;
      Du += bvp.ode_coeffs[k] *
            detail::stencil_apply(u, i, central[k], first[k], h, static_cast<int>(k));
    }
    interior = std::max(interior, std::abs(Du - f(static_cast<double>(i) / N)));
  }

  // One-sided 8-point stencils for the boundary operators.
  double boundary = 0.0;
  for (const auto& bc : bvp.bcs) {
    double val = 0.0;
    for (const auto& [order, coef] : bc.terms) {
      std::vector<double> offsets;
      for (int j = 0; j < 8; ++j) offsets.push_back(bc.endpoint == 0 ? j : -j);
      const Eigen::VectorXd w = detail::fd_weights(offsets, order);
      double acc = 0.0;
      for (int j = 0; j < 8; ++j) acc += w(j) * u(bc.endpoint == 0 ? j : N - j);
      val += coef * acc / std::pow(h, order);
    }
    boundary = std::max(boundary, std::abs(val));
  }
  return {interior, boundary};
}

inline std::shared_ptr<const GreenKernelW22> build_w22_kernel(int resolution = 129) {
  return std::make_shared<const GreenKernelW22>(resolution);
}

enum class InnerProduct { W21Standard, W21MaternModified, W22Standard };

namespace detail {

/// d/dt k(t, src) for the closed-form W21 Green kernels.
inline double w21_kernel_dt(const KernelSpec& spec, double t, double src) {
  if (spec.family == KernelFamily::GreenW21Standard) {
    if (t < src) return std::sinh(t) * std::cosh(1.0 - src) / spec.green_divisor;
    return -std::cosh(src) * std::sinh(1.0 - t) / spec.green_divisor;
  }
  if (spec.family == KernelFamily::GreenW21Matern) {
    const double s = t < src ? 1.0 : -1.0;
    return 0.5 * s * std::exp(-std::abs(t - src));
  }
  throw std::invalid_argument("w21_kernel_dt: kernel has no analytic derivative here");
}

}  // namespace detail

/// Quadrature check of <k(.,x), k(.,y)> = k(x,y) under the candidate inner
/// product; returns the maximum relative deviation over the pairs. W21
/// kernels use analytic first derivatives; the W22 kernel is differentiated
/// numerically.
inline double reproducing_check(const KernelSpec& spec, InnerProduct product,
                                const std::vector<std::pair<double, double>>& pairs,
                                const QuadratureScheme& scheme = {}) {
  const bool is_w21 =
      spec.family == KernelFamily::GreenW21Standard || spec.family == KernelFamily::GreenW21Matern;
  const bool is_w22 = spec.family == KernelFamily::GreenW22Numeric;
  if (product == InnerProduct::W22Standard ? !is_w22 : !is_w21)
    throw std::invalid_argument("reproducing_check: kernel/inner-product combination not supported");

  double worst = 0.0;
  for (const auto& [x, y] : pairs) {
    const QuadratureRule rule = scheme.with_splits({x, y});
    double ip = 0.0;
    for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) {
      const double t = rule.nodes(j);
      const double u = eval_kernel1(spec, t, x);
      const double v = eval_kernel1(spec, t, y);
      double term = u * v;
      if (product == InnerProduct::W22Standard) {
        auto kx = [&](double s) { return eval_kernel1(spec, s, x); };
        auto ky = [&](double s) { return eval_kernel1(spec, s, y); };
        const double h = 1e-4;
        term += detail::numeric_derivative(kx, t, 1, h) * detail::numeric_derivative(ky, t, 1, h);
        term += detail::numeric_derivative(kx, t, 2, h) * detail::numeric_derivative(ky, t, 2, h);
      } else {
        term += detail::w21_kernel_dt(spec, t, x) * detail::w21_kernel_dt(spec, t, y);
      }
      ip += rule.weights(j) * term;
    }
    if (product == InnerProduct::W21MaternModified)
      ip += eval_kernel1(spec, 0.0, x) * eval_kernel1(spec, 0.0, y) +
            eval_kernel1(spec, 1.0, x) * eval_kernel1(spec, 1.0, y);

    const double k = eval_kernel1(spec, x, y);
    worst = std::max(worst, std::abs(ip - k) / std::abs(k));
  }
  return worst;
}

struct DivisorResolution {
  double adopted;
  double residual_sinh1;
  double residual_sinhe;
};

/// Runs the Green-function residual of the cosh kernel under both candidate
/// normalizations and adopts the one that actually solves the Neumann BVP.
inline DivisorResolution resolve_w21_divisor(const QuadratureScheme& scheme = {}) {
  auto f = [](double x) { return std::sin(std::numbers::pi * x); };
  const double r1 = green_residual(green_w21_standard(std::sinh(1.0)), bvp_w21_standard(), f, scheme).interior;
  const double re = green_residual(green_w21_standard(std::sinh(std::numbers::e)), bvp_w21_standard(), f, scheme).interior;
  return {r1 <= re ? std::sinh(1.0) : std::sinh(std::numbers::e), r1, re};
}

}  // namespace superconv
