#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "superconv/kernels.hpp"
#include "superconv/point_set.hpp"

namespace superconv {

// Jitter policy for the SPD solve. base_jitter is applied up front (relative
// to trace/n); on factorization failure the jitter escalates geometrically up
// to max_jitter before giving up.
struct SolveOptions {
  double base_jitter = 0.0;
  double max_jitter = 1e-8;
  double escalation_factor = 10.0;
};

struct SolveFailure : std::runtime_error {
  SolveFailure(const std::string& msg, double pivot, double jitter)
      : std::runtime_error(msg), smallest_pivot(pivot), last_jitter(jitter) {}
  double smallest_pivot;
  double last_jitter;
};

// Fitted kernel interpolant: sum_i a_i k(., x_i). jitter_applied is the
// relative diagonal jitter that was needed (0 for a clean solve).
struct Interpolant {
  KernelSpec kernel;
  PointSet centers;
  Eigen::VectorXd coefficients;
  double jitter_applied = 0.0;
};

/// Solves K_X a = values by Cholesky factorization with jitter escalation.
inline Interpolant fit_interpolant(const KernelSpec& spec, const PointSet& X, const Eigen::VectorXd& values,
                                   const SolveOptions& opts = {}) {
  if (values.size() != X.size()) throw std::invalid_argument("fit_interpolant: |values| must equal |X|");
  if (opts.base_jitter > opts.max_jitter)
    throw std::invalid_argument("fit_interpolant: base_jitter must not exceed max_jitter");

  Eigen::MatrixXd K = gram(spec, X).entries;
  const double scale = K.trace() / static_cast<double>(X.size());

  auto attempt = [&](double rel_jitter) -> std::pair<bool, Eigen::VectorXd> {
    Eigen::MatrixXd M = K;
    if (rel_jitter > 0) M.diagonal().array() += rel_jitter * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) return {false, {}};
    return {true, llt.solve(values)};
  };

  double jitter = opts.base_jitter;
  if (auto [ok, a] = attempt(jitter); ok) return {spec, X, std::move(a), jitter};

  double delta = std::max(opts.base_jitter, 1e-14);
  if (delta <= jitter) delta = jitter * opts.escalation_factor;
  while (delta <= opts.max_jitter * (1.0 + 1e-12)) {
    if (auto [ok, a] = attempt(delta); ok) return {spec, X, std::move(a), delta};
    delta *= opts.escalation_factor;
  }

  const double pivot = Eigen::LDLT<Eigen::MatrixXd>(K).vectorD().minCoeff();
  throw SolveFailure("fit_interpolant: Gram factorization failed up to max_jitter (n=" + std::to_string(X.size()) +
                         ", smallest LDLT pivot " + std::to_string(pivot) + ")",
                     pivot, opts.max_jitter);
}

/// Evaluates the interpolant on a grid. Chunked so large grids do not
/// materialize the full cross-Gram matrix.
inline Eigen::VectorXd eval_interpolant(const Interpolant& s, const PointSet& grid) {
  if (grid.dim() != s.centers.dim()) throw std::invalid_argument("eval_interpolant: dimension mismatch");
  const int m = grid.size(), n = s.centers.size();
  Eigen::VectorXd out(m);
  constexpr int chunk = 4096;
  Eigen::MatrixXd cross;
  for (int start = 0; start < m; start += chunk) {
    const int rows = std::min(chunk, m - start);
    cross.resize(rows, n);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < n; ++j) cross(i, j) = eval_kernel(s.kernel, grid.row(start + i), s.centers.row(j));
    out.segment(start, rows) = cross * s.coefficients;
  }
  return out;
}

// Finite kernel expansion sum_i rho_i k(., z_i) with known sites and weights.
struct KernelExpansion {
  KernelSpec kernel;
  PointSet sites;
  Eigen::VectorXd weights;
};

inline double eval_expansion_at(const KernelExpansion& e, Eigen::Ref<const Eigen::RowVectorXd> x) {
  double v = 0.0;
  for (int i = 0; i < e.sites.size(); ++i) v += e.weights(i) * eval_kernel(e.kernel, x, e.sites.row(i));
  return v;
}

inline Eigen::VectorXd eval_expansion(const KernelExpansion& e, const PointSet& grid) {
  Eigen::VectorXd out(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    double v = 0.0;
    for (int j = 0; j < e.sites.size(); ++j) v += e.weights(j) * eval_kernel(e.kernel, grid.row(i), e.sites.row(j));
    out(i) = v;
  }
  return out;
}

/// Exact squared native norm rho^T K_Z rho of a finite expansion.
inline double native_norm_sq(const KernelExpansion& e) {
  if (e.weights.size() != e.sites.size()) throw std::invalid_argument("native_norm_sq: weights/sites mismatch");
  if (e.sites.empty()) return 0.0;
  const Eigen::MatrixXd K = gram(e.kernel, e.sites).entries;
  return e.weights.dot(K * e.weights);
}

/// Squared native-norm interpolation error ||v - I_X v||_H^2 via the
/// Pythagorean identity ||v||^2 - a^T K_X a. Tiny negative round-off is
/// clamped to 0 (reported through `clamped`); larger negativity throws.
inline double native_error_sq(const KernelExpansion& e, const PointSet& X, const SolveOptions& opts = {},
                              bool* clamped = nullptr) {
  if (clamped) *clamped = false;
  const double norm_sq = native_norm_sq(e);
  if (X.empty()) return norm_sq;

  const Eigen::VectorXd values = eval_expansion(e, X);
  const Interpolant s = fit_interpolant(e.kernel, X, values, opts);
  const Eigen::MatrixXd K = gram(e.kernel, X).entries;
  const double proj_sq = s.coefficients.dot(K * s.coefficients);

  double err = norm_sq - proj_sq;
  if (err < 0) {
    if (err < -1e-8 * norm_sq)
      throw std::runtime_error("native_error_sq: projection norm exceeds expansion norm beyond round-off");
    err = 0.0;
    if (clamped) *clamped = true;
  }
  return err;
}

}  // namespace superconv
