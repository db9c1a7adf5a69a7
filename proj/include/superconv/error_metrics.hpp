#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace superconv {

enum class NormTag { L1, L2, Linf, W1Semi, Native };

inline std::string norm_tag_name(NormTag t) {
  switch (t) {
    case NormTag::L1: return "L1";
    case NormTag::L2: return "L2";
    case NormTag::Linf: return "Linf";
    case NormTag::W1Semi: return "W1_2seminorm";
    case NormTag::Native: return "native";
  }
  throw std::logic_error("norm_tag_name: unknown tag");
}

inline NormTag norm_tag_from_name(const std::string& s) {
  if (s == "L1") return NormTag::L1;
  if (s == "L2") return NormTag::L2;
  if (s == "Linf") return NormTag::Linf;
  if (s == "W1_2seminorm") return NormTag::W1Semi;
  if (s == "native") return NormTag::Native;
  throw std::invalid_argument("unknown norm tag: " + s);
}

// One refinement level: node count, grid-approximated fill distance and the
// discrete errors per norm.
struct ErrorRecord {
  int n = 0;
  double h = 0.0;
  std::map<NormTag, double> errors;
};

/// Validating constructor: h > 0, errors finite and nonnegative, and the
/// discrete norm ordering L1 <= L2 <= Linf on the unit-volume grid.
inline ErrorRecord make_error_record(int n, double h, std::map<NormTag, double> errors) {
  if (!(h > 0.0)) throw std::invalid_argument("ErrorRecord: h must be positive");
  for (const auto& [tag, e] : errors)
    if (!std::isfinite(e) || e < 0) throw std::invalid_argument("ErrorRecord: errors must be finite and >= 0");
  const auto l1 = errors.find(NormTag::L1), l2 = errors.find(NormTag::L2), li = errors.find(NormTag::Linf);
  if (l1 != errors.end() && l2 != errors.end() && li != errors.end()) {
    const double slack = 1e-12 * (1.0 + li->second);
    if (l1->second > l2->second + slack || l2->second > li->second + slack)
      throw std::logic_error("ErrorRecord: norm ordering L1 <= L2 <= Linf violated");
  }
  return {n, h, std::move(errors)};
}

// Log-log rate fit: `rate` is the positive exponent a in e_n ~ n^{-a}
// (the negated OLS slope of log e against log n).
struct RateEstimate {
  NormTag norm = NormTag::L2;
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int levels_used = 0;
  int excluded = 0;
};

/// Discrete L_p distance between two sampled functions. For finite p this is
/// the left-Riemann cell sum (cell_volume * sum |f_i - s_i|^p)^{1/p}; p = Linf
/// gives the maximum difference.
inline double discrete_lp_error(const Eigen::VectorXd& f, const Eigen::VectorXd& s, NormTag p, double cell_volume) {
  if (f.size() != s.size()) throw std::invalid_argument("discrete_lp_error: length mismatch");
  const Eigen::ArrayXd d = (f - s).array().abs();
  switch (p) {
    case NormTag::L1: return cell_volume * d.sum();
    case NormTag::L2: return std::sqrt(cell_volume * d.square().sum());
    case NormTag::Linf: return d.size() == 0 ? 0.0 : d.maxCoeff();
    default: throw std::invalid_argument("discrete_lp_error: p must be L1, L2 or Linf");
  }
}

/// Discrete W^1_2 seminorm of f - s on a uniform 1D grid: central difference
/// quotients at interior points, one-sided at the ends, then the discrete L2
/// norm with cell volume equal to the grid spacing.
inline double w1_seminorm_error(const Eigen::VectorXd& f, const Eigen::VectorXd& s, double grid_spacing) {
  if (f.size() != s.size()) throw std::invalid_argument("w1_seminorm_error: length mismatch");
  const Eigen::Index n = f.size();
  if (n < 3) throw std::invalid_argument("w1_seminorm_error: need at least 3 grid points");
  const Eigen::VectorXd d = f - s;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double q;
    if (i == 0)
      q = (d(1) - d(0)) / grid_spacing;
    else if (i == n - 1)
      q = (d(n - 1) - d(n - 2)) / grid_spacing;
    else
      q = (d(i + 1) - d(i - 1)) / (2.0 * grid_spacing);
    sum += q * q;
  }
  return std::sqrt(grid_spacing * sum);
}

/// Ordinary least-squares fit of log e_n against log n. The first
/// floor(drop_fraction * levels) records (sorted by n) are dropped, and
/// records whose error sits at the numerical floor (below 1e3 * eps * the
/// largest remaining error) are excluded and counted.
inline RateEstimate fit_rate(const std::vector<ErrorRecord>& records, NormTag norm, double drop_fraction = 0.2) {
  if (drop_fraction < 0 || drop_fraction >= 1) throw std::invalid_argument("fit_rate: drop_fraction must be in [0,1)");

  std::vector<std::pair<double, double>> pts;  // (n, e), sorted by n
  for (const auto& rec : records) {
    auto it = rec.errors.find(norm);
    if (it == rec.errors.end()) continue;
    if (it->second < 0) throw std::invalid_argument("fit_rate: negative error encountered");
    pts.emplace_back(static_cast<double>(rec.n), it->second);
  }
  std::sort(pts.begin(), pts.end());

  const auto dropped = static_cast<std::size_t>(std::floor(drop_fraction * static_cast<double>(pts.size())));
  pts.erase(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(dropped));

  double scale = 0.0;
  for (const auto& [n, e] : pts) scale = std::max(scale, e);
  const double floor_level = 1e3 * std::numeric_limits<double>::epsilon() * scale;

  std::vector<std::pair<double, double>> usable;
  for (const auto& [n, e] : pts)
    if (e > floor_level) usable.emplace_back(std::log(n), std::log(e));
  const int excluded = static_cast<int>(pts.size() - usable.size());

  if (usable.size() < 2) throw std::runtime_error("fit_rate: fewer than 2 usable levels");

  const double m = static_cast<double>(usable.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : usable) sx += x, sy += y;
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : usable) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw std::runtime_error("fit_rate: degenerate abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double r2 = 1.0;
  if (syy > 0) {
    double ss_res = 0;
    for (const auto& [x, y] : usable) {
      const double r = y - (intercept + slope * x);
      ss_res += r * r;
    }
    r2 = 1.0 - ss_res / syy;
    r2 = std::clamp(r2, 0.0, 1.0);
  }
  return {norm, -slope, intercept, r2, static_cast<int>(usable.size()), excluded};
}

}  // namespace superconv
