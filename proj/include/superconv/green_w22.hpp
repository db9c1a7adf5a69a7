#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace superconv {

// Green function of u'''' - u'' + u on (0,1) with the natural boundary
// operators u''=0 and u'''-u'=0 at both endpoints. For each source point y the
// kernel is a combination of the fundamental solutions
//   e^{ax}cos(bx), e^{ax}sin(bx), e^{-ax}cos(bx), e^{-ax}sin(bx),
// a = sqrt(3)/2, b = 1/2 (the roots of r^4 - r^2 + 1 = 0 are +-a +- ib), with
// one coefficient quadruple on [0,y] and one on [y,1]. The 8x8 system enforces
// the boundary operators, C^2 continuity across y, and a unit jump of the
// third derivative at y.
class GreenKernelW22 {
 public:
  explicit GreenKernelW22(int resolution = 129) {
    if (resolution < 64) throw std::invalid_argument("GreenKernelW22: resolution must be >= 64");
    for (int i = 1; i + 1 < resolution; ++i) coeffs_for(static_cast<double>(i) / (resolution - 1));
  }

  /// Symmetric evaluation: the pair is canonicalized so k(x,y) == k(y,x)
  /// holds exactly. The self-adjointness of the underlying solve is checked
  /// separately through eval_with_source.
  double eval(double x, double y) const {
    const double lo = std::min(x, y), hi = std::max(x, y);
    return eval_with_source(lo, hi);
  }

  /// Raw evaluation with `source` as the source point of the fundamental
  /// solution; symmetric with eval_with_source(source, x) only up to the
  /// accuracy of the 8x8 solves.
  double eval_with_source(double x, double source) const {
    const Coeffs c = coeffs_for(source);
    const Eigen::Vector4d basis = basis_derivatives(x, 0);
    if (x <= source) return basis.dot(c.head<4>());
    return basis.dot(c.tail<4>());
  }

  /// k-th derivative in the first argument (k <= 3), away from x == source
  /// where derivatives beyond the second jump.
  double derivative_with_source(double x, double source, int k) const {
    const Coeffs c = coeffs_for(source);
    const Eigen::Vector4d basis = basis_derivatives(x, k);
    if (x <= source) return basis.dot(c.head<4>());
    return basis.dot(c.tail<4>());
  }

 private:
  using Coeffs = Eigen::Matrix<double, 8, 1>;

  static Eigen::Vector4d basis_derivatives(double x, int k) {
    static const double a = std::sqrt(3.0) / 2.0;
    const std::complex<double> r1(a, 0.5), r2(-a, 0.5);
    const std::complex<double> e1 = std::pow(r1, k) * std::exp(r1 * x);
    const std::complex<double> e2 = std::pow(r2, k) * std::exp(r2 * x);
    return Eigen::Vector4d(e1.real(), e1.imag(), e2.real(), e2.imag());
  }

  static Coeffs solve_for_source(double y) {
    Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> rhs = Eigen::Matrix<double, 8, 1>::Zero();

    // Boundary operators at 0 (left piece) and 1 (right piece).
    A.block<1, 4>(0, 0) = basis_derivatives(0.0, 2).transpose();
    A.block<1, 4>(1, 0) = (basis_derivatives(0.0, 3) - basis_derivatives(0.0, 1)).transpose();
    A.block<1, 4>(2, 4) = basis_derivatives(1.0, 2).transpose();
    A.block<1, 4>(3, 4) = (basis_derivatives(1.0, 3) - basis_derivatives(1.0, 1)).transpose();

    // Continuity of value and first two derivatives at y, unit jump of the
    // third derivative.
    for (int k = 0; k <= 3; ++k) {
      const Eigen::Vector4d b = basis_derivatives(y, k);
      A.block<1, 4>(4 + k, 0) = -b.transpose();
      A.block<1, 4>(4 + k, 4) = b.transpose();
    }
    rhs(7) = 1.0;

    Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 8, 8>> qr(A);
    if (qr.rank() < 8) throw std::runtime_error("GreenKernelW22: singular fundamental-solution system");
    return qr.solve(rhs);
  }

  Coeffs coeffs_for(double y) const {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(y);
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Coeffs c = solve_for_source(y);
    std::unique_lock lock(mutex_);
    return cache_.emplace(key, c).first->second;
  }

  mutable std::unordered_map<std::uint64_t, Coeffs> cache_;
  mutable std::shared_mutex mutex_;
};

}  // namespace superconv
