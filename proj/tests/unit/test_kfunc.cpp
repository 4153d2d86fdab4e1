#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "orlint/kfunc.hpp"
#include "orlint/numeric.hpp"

using namespace orlint;

namespace {

SampleFunction unit(std::vector<double> v) { return {DiscreteMeasureSpace::uniform(v.size()), std::move(v)}; }

// Dense scan over the truncation level, then a fine scan around the best cell.
double k_lp_linf_oracle(double t, const SampleFunction& x, double p) {
  const double top = sup_norm(x);
  auto f = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      acc += std::pow(std::max(std::abs(x[i]) - lambda, 0.0), p) * x.weight(i);
    }
    return std::pow(acc, 1.0 / p) + t * lambda;
  };
  double best = f(top);
  double arg = top;
  for (int j = 0; j <= 20000; ++j) {
    const double l = top * j / 20000.0;
    if (f(l) < best) best = f(l), arg = l;
  }
  const double h = top / 20000.0;
  for (int j = -2000; j <= 2000; ++j) {
    const double l = std::clamp(arg + h * j / 1000.0, 0.0, top);
    best = std::min(best, f(l));
  }
  return best;
}

}  // namespace

TEST_CASE("k_lp_linf examples") {
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const auto indicator = unit({1.0});
    for (double t : {0.1, 0.5, 1.0, 3.0}) CHECK(k_lp_linf(t, indicator, p).value == doctest::Approx(std::min(1.0, t)));
  }
  CHECK(k_lp_linf(1.5, unit({3, 1, 2}), 1.0).value == doctest::Approx(4.0).epsilon(1e-12));
  const auto x = unit({3, -1, 2});
  CHECK(k_lp_linf(1e6, x, 2.0).value == doctest::Approx(lp_norm(x, 2.0)).epsilon(1e-12));
  CHECK(k_lp_linf(1.0, unit({0, 0}), 2.0).value == 0.0);
}

TEST_CASE("property: k_lp_linf agrees with a dense scan") {
  Rng rng(301);
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = testing::random_function(rng, testing::random_space(rng, 1 + rng.below(6)));
    const double p = 1.0 + rng.uniform(0.0, 3.0);
    const double t = std::exp(rng.uniform(-4.0, 4.0));
    const double fast = k_lp_linf(t, x, p).value;
    const double oracle = k_lp_linf_oracle(t, x, p);
    CHECK(fast <= oracle + 1e-10 * (1.0 + oracle));
    CHECK(fast >= oracle * (1.0 - 1e-7) - 1e-12);
  }
}

TEST_CASE("property: p = 1 truncation equals the integral of x*") {
  Rng rng(302);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = testing::random_function(rng, testing::random_space(rng, 1 + rng.below(8)));
    const double t = rng.uniform(0.0, 1.2) * x.space()->total_measure() + 1e-3;
    const double integral = rearrangement(x).cumulative_power(t, 1.0);
    CHECK(k_lp_linf(t, x, 1.0).value == doctest::Approx(integral).epsilon(1e-10));
  }
}

TEST_CASE("kree bounds examples") {
  const auto one = kree_bounds(2.0, unit({3, 1, 2}), 1.0);
  CHECK(one.lower == one.upper);
  CHECK(one.lower == doctest::Approx(5.0));
  const auto ind = kree_bounds(1.0, unit({1.0}), 2.0);
  CHECK(ind.lower == doctest::Approx(1.0));
  CHECK(ind.upper == doctest::Approx(std::sqrt(2.0)));
  const double k = k_lp_linf(1.0, unit({1.0}), 2.0).value;
  CHECK(k >= ind.lower);
  CHECK(k <= ind.upper);
  const auto tiny = kree_bounds(1e-14, unit({5, 2}), 2.0);
  CHECK(tiny.upper < 1e-6);
}

TEST_CASE("l_functional examples") {
  const ExponentCouple c12(1.0, 2.0);
  CHECK(l_functional(1.0, unit({1.0}), c12).value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(l_functional(1.0, unit({-1.0}), c12).value == doctest::Approx(0.75).epsilon(1e-12));
  const auto x = unit({0.5, 2.0, -3.0});
  CHECK(l_functional(1e15, x, ExponentCouple(1.5, 3.0)).value ==
        doctest::Approx(lp_integral(x, 1.5)).epsilon(1e-6));
  CHECK(l_functional(1e-12, x, ExponentCouple(1.5, 3.0)).value < 1e-10);
  CHECK(pointwise_l_minimum(1.0, 1.0, 1.0, 2.0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("l_star_functional examples") {
  const ExponentCouple c12(1.0, 2.0);
  for (double t : {0.1, 1.0, 5.0}) CHECK(l_star_functional(t, unit({1.0}), c12) == std::min(1.0, t));
  CHECK(l_star_functional(0.25, unit({2.0}), c12) == 1.0);
  CHECK(l_star_functional(0.5, unit({2.0}), c12) == 2.0);
  CHECK(l_star_functional(3.0, unit({2.0}), c12) == 2.0);
}

TEST_CASE("brute force oracle examples") {
  const ExponentCouple c12(1.0, 2.0);
  CHECK(brute_force_k(1.0, unit({0.0, 0.0}), c12) == 0.0);
  CHECK(brute_force_k(1.0, unit({1.0}), c12) == doctest::Approx(0.75).epsilon(1e-3));
  CHECK_THROWS(brute_force_k(1.0, unit({1, 1, 1, 1}), c12));
  CHECK_THROWS(brute_force_k(1.0, unit({1.0}), c12, 500));
}

TEST_CASE("property: functionals are monotone in t and |x|, sign blind, and ordered") {
  Rng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const auto space = testing::random_space(rng, 1 + rng.below(6));
    const auto x = testing::random_function(rng, space);
    std::vector<double> bigger(x.size());
    for (std::size_t i = 0; i < bigger.size(); ++i) bigger[i] = x[i] * (1.0 + rng.uniform());
    const auto y = x.with_values(bigger);
    const double p = rng.uniform(1.0, 2.5);
    const ExponentCouple c(p, p + rng.uniform(0.3, 2.5));
    double prev_l = 0.0;
    double prev_k = 0.0;
    for (double t : numeric::log_grid(1e-4, 1e4, 17)) {
      const double l = l_functional(t, x, c).value;
      const double k = k_lp_linf(t, x, p).value;
      CHECK(l >= prev_l * (1.0 - 1e-10));
      CHECK(k >= prev_k * (1.0 - 1e-10));
      prev_l = l;
      prev_k = k;
      CHECK(l_functional(t, y, c).value >= l * (1.0 - 1e-10));
      CHECK(k_lp_linf(t, y, p).value >= k * (1.0 - 1e-10));
      CHECK(l_functional(t, x.abs(), c).value == l);
      CHECK(k_lp_linf(t, x.abs(), p).value == k);
      CHECK(l_star_functional(t, x.abs(), c) == l_star_functional(t, x, c));
      CHECK(l <= l_star_functional(t, x, c) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("property: brute force bounds l_functional from above") {
  Rng rng(304);
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = testing::random_function(rng, testing::random_space(rng, 1 + rng.below(2)));
    const double p = rng.uniform(1.0, 2.5);
    const ExponentCouple c(p, p + rng.uniform(0.3, 2.5));
    const double t = std::exp(rng.uniform(-3.0, 3.0));
    const double exact = l_functional(t, x, c).value;
    const double grid = brute_force_k(t, x, c, 101);
    CHECK(grid >= exact * (1.0 - 1e-12));
  }
}

TEST_CASE("method tags") {
  CHECK(k_lp_linf(1.0, unit({1.0}), 2.0).method == KMethod::Truncation);
  CHECK(l_functional(1.0, unit({1.0}), ExponentCouple(1, 2)).method == KMethod::Pointwise);
  CHECK(to_string(KMethod::BruteForce) == "brute_force");
}
