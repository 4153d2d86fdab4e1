#pragma once

// Scalar solvers shared by the numerical modules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "orlint/error.hpp"

namespace orlint::numeric {

/// Bisection for a sign change of f on [lo, hi]. Returns the bracket end
/// where f keeps the sign of f(hi).
template <typename F>
double bisect(F&& f, double lo, double hi, double x_tol, int max_iter = 400) {
  double flo = f(lo);
  for (int i = 0; i < max_iter; ++i) {
    if (hi - lo <= x_tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const double fmid = f(mid);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section search for the minimizer of a unimodal f on [lo, hi].
/// Returns (argmin, min).
template <typename F>
std::pair<double, double> golden_section(F&& f, double lo, double hi, double x_tol,
                                         int max_iter = 300) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Ternary search on a convex f over [lo, hi]; returns (argmin, min) and
/// always considers both endpoints.
template <typename F>
std::pair<double, double> ternary_min(F&& f, double lo, double hi, int iterations = 200) {
  const double a0 = lo;
  const double b0 = hi;
  for (int i = 0; i < iterations && hi > lo; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  std::pair best{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  for (double x : {a0, b0}) {
    const double fx = f(x);
    if (fx < best.second) best = {x, fx};
  }
  return best;
}

/// Root of a nondecreasing function g on [lo, hi] with g(lo) <= 0 <= g(hi),
/// using Newton steps safeguarded by bisection (dg is the derivative).
template <typename G, typename DG>
double safeguarded_newton(G&& g, DG&& dg, double lo, double hi, int max_iter = 100) {
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (gx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = dg(x);
    double next = (slope > 0.0 && std::isfinite(slope)) ? x - gx / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    if (std::abs(next - x) <= 2.0 * kEps * std::abs(x) ||
        hi - lo <= 4.0 * kEps * std::abs(hi)) {
      return next;
    }
    x = next;
  }
  return x;
}

/// n log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

/// Points 10^(k/per_decade) covering [lo, hi]; 1 is always a member when in range.
inline std::vector<double> decade_grid(double lo, double hi, int per_decade) {
  const auto k0 = static_cast<long>(std::ceil(std::log10(lo) * per_decade - 1e-9));
  const auto k1 = static_cast<long>(std::floor(std::log10(hi) * per_decade + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::max(0L, k1 - k0 + 1)));
  for (long k = k0; k <= k1; ++k) {
    grid.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
  }
  return grid;
}

/// n uniformly spaced points from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) grid.back() = hi;
  return grid;
}

}  // namespace orlint::numeric
