#pragma once

// Peetre K-functional of (L^p, L^inf), the L-functional K_{p,q} and its
// pointwise modification K*_{p,q} for (L^p, L^q), and a brute-force
// decomposition oracle.
//
// K_{p,q} only sees |x| and only needs nonnegative decompositions
// |x| <= x0 + x1. Both ||x0||_p^p and ||x1||_q^q are sums over atoms and the
// constraint is per atom, so the infimum separates into one convex 1-D
// problem per atom. brute_force_k searches signed decompositions jointly and
// is the check on that reduction.

#include <cstddef>
#include <string>
#include <utility>

#include "orlint/measure.hpp"
#include "orlint/orlicz.hpp"

namespace orlint {

enum class KMethod { Truncation, Pointwise, BruteForce, Formula };

std::string to_string(KMethod method);

struct KEvaluation {
  double t = 0.0;
  double value = 0.0;
  KMethod method = KMethod::Formula;
};

/// K(t, x; L^p, L^inf) = inf over lambda in [0, ||x||_inf] of
/// ||(|x| - lambda)_+||_p + t lambda.
KEvaluation k_lp_linf(double t, const SampleFunction& x, double p);

struct KreeBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = (int_0^t x*(s)^p ds)^(1/p), upper = 2^(1-1/p) lower. These bracket
/// K(t^(1/p), x; L^p, L^inf); note the substituted parameter.
KreeBounds kree_bounds(double t, const SampleFunction& x, double p);

/// min over a in [0, c] of a^p + t (c - a)^q, for 1 <= p < q < inf.
double pointwise_l_minimum(double c, double t, double p, double q);

/// K_{p,q}(t, x; L^p, L^q) with 1 <= p < q < inf.
KEvaluation l_functional(double t, const SampleFunction& x, const ExponentCouple& couple);

/// K*_{p,q}(t, x) = sum_i w_i min(|x_i|^p, t |x_i|^q).
double l_star_functional(double t, const SampleFunction& x, const ExponentCouple& couple);

/// Grid minimum of ||x0||_p^p + t ||x1||_q^q over signed x0 in
/// [-2|x|, 2|x|]^atoms (n points per atom), x1 = x - x0. An upper bound on
/// K_{p,q} that converges as n grows. At most 3 atoms, n <= 201.
double brute_force_k(double t, const SampleFunction& x, const ExponentCouple& couple, int n = 201);

}  // namespace orlint
