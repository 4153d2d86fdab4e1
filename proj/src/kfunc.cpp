#include "orlint/kfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "orlint/numeric.hpp"

namespace orlint {

std::string to_string(KMethod method) {
  switch (method) {
    case KMethod::Truncation: return "truncation";
    case KMethod::Pointwise: return "pointwise";
    case KMethod::BruteForce: return "brute_force";
    case KMethod::Formula: return "formula";
  }
  return "formula";
}

namespace {

void require_positive_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("K-functional parameter t must be positive");
}

}  // namespace

KEvaluation k_lp_linf(double t, const SampleFunction& x, double p) {
  require_positive_t(t);
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("k_lp_linf needs 1 <= p < inf");
  const SampleFunction ax = x.abs();
  auto objective = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      const double excess = ax[i] - lambda;
      if (excess > 0.0) acc += std::pow(excess, p) * ax.weight(i);
    }
    return std::pow(acc, 1.0 / p) + t * lambda;
  };
  // The objective is convex with kinks at the data values; the minimizer lies
  // between the neighbours of the best candidate.
  std::vector<double> candidates(ax.values().begin(), ax.values().end());
  candidates.push_back(0.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double v = objective(candidates[k]);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  if (p > 1.0 && candidates.size() > 1) {
    for (std::size_t side : {std::size_t{0}, std::size_t{1}}) {
      const std::size_t lo_idx = side == 0 ? (best == 0 ? 0 : best - 1) : best;
      const std::size_t hi_idx = side == 0 ? best : std::min(best + 1, candidates.size() - 1);
      if (lo_idx == hi_idx) continue;
      const auto [arg, val] = numeric::golden_section(objective, candidates[lo_idx], candidates[hi_idx],
                                                      1e-15 * std::max(1.0, candidates.back()), 400);
      (void)arg;
      best_val = std::min(best_val, val);
    }
  }
  return {t, best_val, KMethod::Truncation};
}

KreeBounds kree_bounds(double t, const SampleFunction& x, double p) {
  require_positive_t(t);
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("kree_bounds needs 1 <= p < inf");
  const double lower = std::pow(rearrangement(x).cumulative_power(t, p), 1.0 / p);
  return {lower, std::pow(2.0, 1.0 - 1.0 / p) * lower};
}

double pointwise_l_minimum(double c, double t, double p, double q) {
  if (c <= 0.0) return 0.0;
  auto objective = [&](double a) { return std::pow(a, p) + t * std::pow(c - a, q); };
  // Derivative of the convex objective; nondecreasing in a.
  auto grad = [&](double a) { return p * std::pow(a, p - 1.0) - t * q * std::pow(c - a, q - 1.0); };
  auto hess = [&](double a) {
    const double first = p > 1.0 ? p * (p - 1.0) * std::pow(a, p - 2.0) : 0.0;
    return first + t * q * (q - 1.0) * std::pow(c - a, q - 2.0);
  };
  if (grad(0.0) >= 0.0) return objective(0.0);
  const double a = numeric::safeguarded_newton(grad, hess, 0.0, c);
  return std::min({objective(a), objective(0.0), objective(c)});
}

KEvaluation l_functional(double t, const SampleFunction& x, const ExponentCouple& couple) {
  require_positive_t(t);
  if (couple.q_infinite()) throw std::invalid_argument("l_functional needs finite q; use k_lp_linf");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x.weight(i) * pointwise_l_minimum(std::abs(x[i]), t, couple.p, couple.q);
  }
  return {t, acc, KMethod::Pointwise};
}

double l_star_functional(double t, const SampleFunction& x, const ExponentCouple& couple) {
  require_positive_t(t);
  if (couple.q_infinite()) throw std::invalid_argument("l_star_functional needs finite q");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = std::abs(x[i]);
    acc += x.weight(i) * std::min(std::pow(c, couple.p), t * std::pow(c, couple.q));
  }
  return acc;
}

double brute_force_k(double t, const SampleFunction& x, const ExponentCouple& couple, int n) {
  require_positive_t(t);
  if (couple.q_infinite()) throw std::invalid_argument("brute_force_k needs finite q");
  if (x.size() > 3) throw std::invalid_argument("brute_force_k: at most 3 atoms");
  if (n < 2 || n > 201) throw std::invalid_argument("brute_force_k: grid resolution must be in [2, 201]");
  const std::size_t atoms = x.size();
  if (atoms == 0) return 0.0;
  std::vector<std::vector<double>> axes(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    const double r = 2.0 * std::abs(x[i]);
    axes[i] = numeric::linear_grid(-r, r, static_cast<std::size_t>(n));
  }
  std::vector<std::size_t> idx(atoms, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double norm_p = 0.0;
    double norm_q = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
      const double x0 = axes[i][idx[i]];
      const double x1 = x[i] - x0;
      norm_p += std::pow(std::abs(x0), couple.p) * x.weight(i);
      norm_q += std::pow(std::abs(x1), couple.q) * x.weight(i);
    }
    best = std::min(best, norm_p + t * norm_q);
    std::size_t d = 0;
    while (d < atoms && ++idx[d] == static_cast<std::size_t>(n)) idx[d++] = 0;
    if (d == atoms) break;
  }
  return best;
}

}  // namespace orlint
