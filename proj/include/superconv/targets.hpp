#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "superconv/interpolation.hpp"
#include "superconv/point_set.hpp"
#include "superconv/rng.hpp"

namespace superconv {

// Evaluable test function on [0,1]^d with smoothness metadata. Deterministic
// given (kind, parameters, seed); immutable after construction.
class TargetFunction {
 public:
  enum class Kind { PowerAlpha, BC1, BC2, BC3, RandomPeriodic, Expansion };

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }

  /// Sobolev smoothness metadata, alpha + 1/2 for the analytic kinds.
  double sobolev_smoothness() const { return smoothness_; }

  const KernelExpansion* expansion() const { return expansion_ ? &*expansion_ : nullptr; }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::PowerAlpha: return std::pow(x, alpha_);
      case Kind::BC1: return std::pow(x, alpha_) + x * x;
      case Kind::BC2: return std::pow(x, alpha_) + alpha_ * (1.0 - alpha_) / 6.0 * x * x * x;
      case Kind::BC3: {
        const double a = alpha_;
        const double c3 = (-1.0 + 5.0 * a - 2.0 * a * a) / 52.0;
        const double c2 = (8.0 - 14.0 * a + 3.0 * a * a) / 39.0;
        const double c0 = (16.0 - 28.0 * a + 6.0 * a * a) / 13.0;
        return std::pow(x, a) + a * x * (c3 * x * x * x + c2 * x * x + c0);
      }
      case Kind::RandomPeriodic: {
        double v = 1.0;
        for (const auto& [j, c] : fourier_) v += c * std::cos(2.0 * std::numbers::pi * j * x);
        return v;
      }
      case Kind::Expansion: {
        Eigen::RowVectorXd p(1);
        p(0) = x;
        return eval_expansion_at(*expansion_, p);
      }
    }
    throw std::logic_error("TargetFunction: unknown kind");
  }

  double operator()(Eigen::Ref<const Eigen::RowVectorXd> x) const {
    if (x.size() != dim_) throw std::invalid_argument("TargetFunction: point dimension mismatch");
    if (kind_ == Kind::Expansion) return eval_expansion_at(*expansion_, x);
    return (*this)(x(0));  // the analytic kinds depend on the first coordinate only
  }

  Eigen::VectorXd operator()(const PointSet& grid) const {
    if (kind_ == Kind::Expansion) return eval_expansion(*expansion_, grid);
    Eigen::VectorXd out(grid.size());
    for (int i = 0; i < grid.size(); ++i) out(i) = (*this)(grid.coords()(i, 0));
    return out;
  }

  static TargetFunction power(double alpha, int d) {
    if (alpha <= 0) throw std::invalid_argument("power_target: alpha must be positive");
    if (d != 1 && d != 2) throw std::invalid_argument("power_target: d must be 1 or 2");
    TargetFunction f;
    f.kind_ = Kind::PowerAlpha;
    f.alpha_ = alpha;
    f.dim_ = d;
    f.smoothness_ = alpha + 0.5;
    return f;
  }

  static TargetFunction bc(int variant, double alpha) {
    if (alpha <= 1.5) throw std::invalid_argument("bc_target: alpha must exceed 3/2");
    TargetFunction f;
    switch (variant) {
      case 1: f.kind_ = Kind::BC1; break;
      case 2: f.kind_ = Kind::BC2; break;
      case 3: f.kind_ = Kind::BC3; break;
      default: throw std::invalid_argument("bc_target: variant must be 1, 2 or 3");
    }
    f.alpha_ = alpha;
    f.dim_ = 1;
    f.smoothness_ = alpha + 0.5;
    return f;
  }

  static TargetFunction random_periodic(double alpha, std::uint64_t seed, int truncation = 1000) {
    if (alpha <= 0 || truncation < 1)
      throw std::invalid_argument("random_periodic_target: need alpha > 0 and J >= 1");
    TargetFunction f;
    f.kind_ = Kind::RandomPeriodic;
    f.alpha_ = alpha;
    f.dim_ = 1;
    f.seed_ = seed;
    f.smoothness_ = alpha + 0.5;
    SplitMix64 gen(seed);
    for (int j = 1; j <= truncation; ++j) {
      const long xi = gen.uniform_int(-1, 1);
      if (xi != 0) f.fourier_.emplace_back(j, static_cast<double>(xi) * std::pow(static_cast<double>(j), -alpha));
    }
    return f;
  }

  static TargetFunction from_expansion(KernelExpansion e) {
    TargetFunction f;
    f.kind_ = Kind::Expansion;
    f.dim_ = e.kernel.dimension;
    f.smoothness_ = std::numeric_limits<double>::quiet_NaN();
    f.expansion_ = std::move(e);
    return f;
  }

 private:
  Kind kind_ = Kind::PowerAlpha;
  double alpha_ = 1.0;
  int dim_ = 1;
  double smoothness_ = 1.5;
  std::uint64_t seed_ = 0;
  std::vector<std::pair<int, double>> fourier_;  // (j, xi_j * j^-alpha), zero draws skipped
  std::optional<KernelExpansion> expansion_;
};

inline TargetFunction power_target(double alpha, int d = 1) { return TargetFunction::power(alpha, d); }
inline TargetFunction bc_target(int variant, double alpha) { return TargetFunction::bc(variant, alpha); }
inline TargetFunction random_periodic_target(double alpha, std::uint64_t seed, int truncation = 1000) {
  return TargetFunction::random_periodic(alpha, seed, truncation);
}

/// Random kernel expansion with M sites uniform in (0,1)^d and weights
/// uniform in [-1,1]; the draw order (sites coordinate-major, then weights)
/// is part of the contract so results regenerate bit-identically.
inline TargetFunction expansion_target(const KernelSpec& kernel, int sites, std::uint64_t seed) {
  if (sites < 1) throw std::invalid_argument("expansion_target: need at least one site");
  SplitMix64 gen(seed);
  Eigen::MatrixXd z(sites, kernel.dimension);
  for (int i = 0; i < sites; ++i)
    for (int c = 0; c < kernel.dimension; ++c) z(i, c) = gen.uniform();
  Eigen::VectorXd rho(sites);
  for (int i = 0; i < sites; ++i) rho(i) = gen.uniform(-1.0, 1.0);
  return TargetFunction::from_expansion({kernel, PointSet(std::move(z)), std::move(rho)});
}

enum class BoundaryOrder { order2, order3 };

namespace detail {

// Weights of a one-sided stencil on nodes offset + j*spacing from the
// endpoint that reproduces the requested derivative functional at the
// endpoint exactly on polynomials of degree < npoints.
inline Eigen::VectorXd endpoint_stencil(int npoints, double offset, double spacing, int deriv,
                                        bool subtract_first_deriv) {
  Eigen::MatrixXd V(npoints, npoints);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(npoints);
  for (int m = 0; m < npoints; ++m) {
    for (int j = 0; j < npoints; ++j) V(m, j) = std::pow(offset + j * spacing, m);
    if (m == deriv) rhs(m) += std::tgamma(m + 1.0);
    if (subtract_first_deriv && m == 1) rhs(m) -= 1.0;
  }
  return V.fullPivLu().solve(rhs);
}

}  // namespace detail

/// Numerical boundary residuals of a target at both endpoints: f'' for
/// order2, f''' - f' for order3, extrapolated from one-sided 5-point stencils
/// on a tiny offset grid (offset 1e-3, spacing 1e-3).
inline std::pair<double, double> bc_residual(const TargetFunction& f, BoundaryOrder which) {
  constexpr int npoints = 5;
  constexpr double offset = 1e-3, spacing = 1e-3;
  const int deriv = which == BoundaryOrder::order2 ? 2 : 3;
  const bool minus_first = which == BoundaryOrder::order3;
  const Eigen::VectorXd w = detail::endpoint_stencil(npoints, offset, spacing, deriv, minus_first);

  double at0 = 0.0, at1 = 0.0;
  for (int j = 0; j < npoints; ++j) {
    const double t = offset + j * spacing;
    at0 += w(j) * f(t);
    // Mirrored stencil at 1; both terms of the functional have odd order for
    // order3, so the whole value flips sign there.
    const double fx = f(1.0 - t);
    at1 += w(j) * (deriv % 2 == 0 ? fx : -fx);
  }
  return {at0, at1};
}

}  // namespace superconv
