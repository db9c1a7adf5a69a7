#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "superconv/green_w22.hpp"
#include "superconv/point_set.hpp"

namespace superconv {

enum class KernelFamily {
  MaternBasic,
  MaternLinear,
  MaternQuadratic,
  WendlandLinear,
  PeriodicBernoulli,
  PeriodicSeries,
  GreenW21Standard,
  GreenW21Matern,
  GreenW22Numeric,
};

// Tagged kernel description. Immutable in practice: build one with a factory
// below and pass it around by value.
struct KernelSpec {
  KernelFamily family = KernelFamily::MaternBasic;
  int dimension = 1;
  int bernoulli_order = 1;     // PeriodicBernoulli r in {1,2}
  double series_alpha = 1.0;   // PeriodicSeries decay exponent
  int series_truncation = 1000;
  double green_divisor = 1.1752011936438014;  // sinh(1); see green_ops divisor check
  std::shared_ptr<const GreenKernelW22> w22;
};

inline KernelSpec matern_basic(int d = 1) { return {KernelFamily::MaternBasic, d}; }
inline KernelSpec matern_linear(int d = 1) { return {KernelFamily::MaternLinear, d}; }
inline KernelSpec matern_quadratic(int d = 1) { return {KernelFamily::MaternQuadratic, d}; }
inline KernelSpec wendland_linear() { return {KernelFamily::WendlandLinear, 1}; }

inline KernelSpec periodic_bernoulli(int r) {
  if (r != 1 && r != 2) throw std::invalid_argument("periodic_bernoulli: order must be 1 or 2");
  KernelSpec s{KernelFamily::PeriodicBernoulli, 1};
  s.bernoulli_order = r;
  return s;
}

inline KernelSpec periodic_series(double alpha, int truncation = 1000) {
  if (alpha <= 0 || truncation < 1) throw std::invalid_argument("periodic_series: need alpha > 0 and J >= 1");
  KernelSpec s{KernelFamily::PeriodicSeries, 1};
  s.series_alpha = alpha;
  s.series_truncation = truncation;
  return s;
}

inline KernelSpec green_w21_standard(double divisor = std::sinh(1.0)) {
  KernelSpec s{KernelFamily::GreenW21Standard, 1};
  s.green_divisor = divisor;
  return s;
}

inline KernelSpec green_w21_matern() { return {KernelFamily::GreenW21Matern, 1}; }

inline KernelSpec green_w22_numeric(std::shared_ptr<const GreenKernelW22> kernel) {
  KernelSpec s{KernelFamily::GreenW22Numeric, 1};
  s.w22 = std::move(kernel);
  return s;
}

/// Bernoulli polynomial of degree 2 or 4 on [0,1].
inline double bernoulli_poly(int degree, double t) {
  if (t < -1e-12 || t > 1.0 + 1e-12) throw std::invalid_argument("bernoulli_poly: t must be in [0,1]");
  switch (degree) {
    case 2: return t * t - t + 1.0 / 6.0;
    case 4: return t * t * (t * t - 2.0 * t + 1.0) - 1.0 / 30.0;
    default: throw std::invalid_argument("bernoulli_poly: degree must be 2 or 4");
  }
}

/// Sobolev order tau of the kernel's native space on [0,1]^d.
inline double sobolev_order(const KernelSpec& spec) {
  const double d = spec.dimension;
  switch (spec.family) {
    case KernelFamily::MaternBasic: return (d + 1) / 2;
    case KernelFamily::MaternLinear: return (d + 3) / 2;
    case KernelFamily::MaternQuadratic: return (d + 5) / 2;
    case KernelFamily::WendlandLinear: return 1.0;
    case KernelFamily::PeriodicBernoulli: return spec.bernoulli_order;
    case KernelFamily::PeriodicSeries: return spec.series_alpha;
    case KernelFamily::GreenW21Standard:
    case KernelFamily::GreenW21Matern: return 1.0;
    case KernelFamily::GreenW22Numeric: return 2.0;
  }
  throw std::logic_error("sobolev_order: unknown family");
}

namespace detail {

inline double periodic_distance(double t) {
  // Reduce x - y modulo 1; B_{2r}(u) = B_{2r}(1-u) so the sign is irrelevant.
  double u = t - std::floor(t);
  if (u >= 1.0) u -= 1.0;
  return u;
}

inline void validate_dimension(const KernelSpec& spec) {
  if (spec.dimension != 1 && spec.dimension != 2) throw std::invalid_argument("KernelSpec: dimension must be 1 or 2");
  const bool one_d_only = spec.family == KernelFamily::WendlandLinear ||
                          spec.family == KernelFamily::PeriodicBernoulli ||
                          spec.family == KernelFamily::PeriodicSeries ||
                          spec.family == KernelFamily::GreenW21Standard ||
                          spec.family == KernelFamily::GreenW21Matern ||
                          spec.family == KernelFamily::GreenW22Numeric;
  if (one_d_only && spec.dimension != 1)
    throw std::invalid_argument("KernelSpec: this family is defined for d = 1 only");
}

}  // namespace detail

/// Pointwise kernel evaluation on [0,1]^d.
template <typename DerivedA, typename DerivedB>
double eval_kernel(const KernelSpec& spec, const Eigen::MatrixBase<DerivedA>& x,
                   const Eigen::MatrixBase<DerivedB>& y) {
  detail::validate_dimension(spec);
  if (x.size() != spec.dimension || y.size() != spec.dimension)
    throw std::invalid_argument("eval_kernel: point dimension mismatch");

  switch (spec.family) {
    case KernelFamily::MaternBasic: {
      const double r = (x - y).norm();
      return std::exp(-r);
    }
    case KernelFamily::MaternLinear: {
      const double r = (x - y).norm();
      return std::exp(-r) * (1.0 + r);
    }
    case KernelFamily::MaternQuadratic: {
      const double r = (x - y).norm();
      return std::exp(-r) * (3.0 + 3.0 * r + r * r);
    }
    case KernelFamily::WendlandLinear: {
      const double r = std::abs(x(0) - y(0));
      return std::max(1.0 - r, 0.0);
    }
    case KernelFamily::PeriodicBernoulli: {
      const double u = detail::periodic_distance(std::abs(x(0) - y(0)));
      const int r = spec.bernoulli_order;
      const double two_pi = 2.0 * std::numbers::pi;
      double factor = 1.0;
      for (int k = 1; k <= 2 * r; ++k) factor *= two_pi / k;  // (2*pi)^{2r} / (2r)!
      const double sign = (r % 2 == 0) ? -1.0 : 1.0;          // (-1)^{r+1}
      return 1.0 + sign * factor * bernoulli_poly(2 * r, u);
    }
    case KernelFamily::PeriodicSeries: {
      const double t = x(0) - y(0);
      double sum = 0.0;
      for (int j = spec.series_truncation; j >= 1; --j)
        sum += std::pow(static_cast<double>(j), -2.0 * spec.series_alpha) *
               std::cos(2.0 * std::numbers::pi * j * t);
      return 1.0 + 2.0 * sum;
    }
    case KernelFamily::GreenW21Standard: {
      const double lo = std::min(x(0), y(0)), hi = std::max(x(0), y(0));
      return std::cosh(lo) * std::cosh(1.0 - hi) / spec.green_divisor;
    }
    case KernelFamily::GreenW21Matern:
      return 0.5 * std::exp(-std::abs(x(0) - y(0)));
    case KernelFamily::GreenW22Numeric:
      if (!spec.w22) throw std::logic_error("eval_kernel: GreenW22Numeric used before construction");
      return spec.w22->eval(x(0), y(0));
  }
  throw std::logic_error("eval_kernel: unknown family");
}

inline double eval_kernel1(const KernelSpec& spec, double x, double y) {
  Eigen::Matrix<double, 1, 1> px, py;
  px(0) = x;
  py(0) = y;
  return eval_kernel(spec, px, py);
}

// Gram matrix together with the pair that produced it.
struct GramMatrix {
  Eigen::MatrixXd entries;
  KernelSpec spec;
  PointSet points;
};

/// Assembles the kernel Gram matrix; the lower triangle is computed and
/// mirrored, so symmetry holds by construction.
inline GramMatrix gram(const KernelSpec& spec, const PointSet& X) {
  const int n = X.size();
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = eval_kernel(spec, X.row(i), X.row(j));
      K(i, j) = v;
      K(j, i) = v;
    }
  return {std::move(K), spec, X};
}

enum class SpdDiagnosis { spd, semidefinite, indefinite };

struct SpdReport {
  SpdDiagnosis diagnosis;
  double smallest_pivot;
};

/// Pivoted LDL^T probe of a symmetric matrix. "indefinite" means a pivot
/// below -strict_tol * trace/n appeared; pivots within the band around zero
/// give "semidefinite".
inline SpdReport check_spd(const Eigen::MatrixXd& G, double strict_tol = 1e-12) {
  if (G.rows() != G.cols()) throw std::invalid_argument("check_spd: matrix must be square");
  const double scale = G.trace() / static_cast<double>(G.rows());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  const double smallest = ldlt.vectorD().minCoeff();
  SpdDiagnosis diag;
  if (smallest < -strict_tol * scale)
    diag = SpdDiagnosis::indefinite;
  else if (smallest <= strict_tol * scale)
    diag = SpdDiagnosis::semidefinite;
  else
    diag = SpdDiagnosis::spd;
  return {diag, smallest};
}

inline SpdReport check_spd(const GramMatrix& G, double strict_tol = 1e-12) {
  return check_spd(G.entries, strict_tol);
}

/// Stable string identifiers used by the CLI and config files.
inline std::string kernel_id(const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::MaternBasic: return "matern-basic";
    case KernelFamily::MaternLinear: return "matern-linear";
    case KernelFamily::MaternQuadratic: return "matern-quadratic";
    case KernelFamily::WendlandLinear: return "wendland-1";
    case KernelFamily::PeriodicBernoulli: return "periodic-r" + std::to_string(spec.bernoulli_order);
    case KernelFamily::PeriodicSeries: return "periodic-series";
    case KernelFamily::GreenW21Standard: return "green-w21-std";
    case KernelFamily::GreenW21Matern: return "green-w21-matern";
    case KernelFamily::GreenW22Numeric: return "green-w22";
  }
  throw std::logic_error("kernel_id: unknown family");
}

inline std::vector<std::string> known_kernel_ids() {
  return {"matern-basic",  "matern-linear",    "matern-quadratic", "wendland-1", "periodic-r1",
          "periodic-r2",   "periodic-series",  "green-w21-std",    "green-w21-matern", "green-w22"};
}

/// Parses a kernel identifier. GreenW22Numeric specs come back without the
/// built kernel attached; callers construct it on demand.
inline KernelSpec kernel_from_id(const std::string& id, int dimension = 1) {
  KernelSpec s;
  if (id == "matern-basic") s = matern_basic(dimension);
  else if (id == "matern-linear") s = matern_linear(dimension);
  else if (id == "matern-quadratic") s = matern_quadratic(dimension);
  else if (id == "wendland-1") s = wendland_linear();
  else if (id == "periodic-r1") s = periodic_bernoulli(1);
  else if (id == "periodic-r2") s = periodic_bernoulli(2);
  else if (id == "periodic-series") s = periodic_series(1.0);
  else if (id == "green-w21-std") s = green_w21_standard();
  else if (id == "green-w21-matern") s = green_w21_matern();
  else if (id == "green-w22") s = KernelSpec{KernelFamily::GreenW22Numeric, 1};
  else throw std::invalid_argument("unknown kernel id: " + id);
  if (s.dimension != dimension)
    throw std::invalid_argument("kernel '" + id + "' is defined for d = " + std::to_string(s.dimension) + " only");
  detail::validate_dimension(s);
  return s;
}

}  // namespace superconv
