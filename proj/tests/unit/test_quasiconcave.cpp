#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "orlint/numeric.hpp"
#include "orlint/orlicz.hpp"
#include "orlint/quasiconcave.hpp"

using namespace orlint;

namespace {

// inf_s (1 + t/s) rho(s) over a dense log grid, independent of the envelope code.
double majorant_oracle(const std::function<double(double)>& rho, double t) {
  double best = INFINITY;
  for (double s : numeric::log_grid(1e-10, 1e10, 40001)) best = std::min(best, (1.0 + t / s) * rho(s));
  return best;
}

}  // namespace

TEST_CASE("is_quasiconcave examples") {
  const auto grid = default_check_grid();
  CHECK(is_quasiconcave(QuasiConcaveFn::min_one().evaluator(), grid).ok);
  CHECK(is_quasiconcave(QuasiConcaveFn::max_one().evaluator(), grid).ok);
  const auto square = is_quasiconcave([](double t) { return t * t; }, grid);
  CHECK_FALSE(square.ok);
  CHECK(square.worst_violation > 0.0);
  CHECK_FALSE(is_quasiconcave([](double t) { return 1.0 / t; }, grid).ok);
  CHECK_THROWS(is_quasiconcave([](double t) { return t - 1.0; }, grid));
  CHECK_THROWS(is_quasiconcave([](double) { return 1.0; }, numeric::log_grid(1.0, 2.0, 10)));
}

TEST_CASE("power_log examples") {
  CHECK(power_log_rho(0.5, 0, 0)(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(power_log_rho(0.5, 1, 0)(1.0) == doctest::Approx(std::log(std::numbers::e + 1.0)).epsilon(1e-14));
  CHECK(power_log_rho(0.5, 1, 0)(1.0) == doctest::Approx(1.31326).epsilon(1e-5));
  CHECK(power_log_rho(0.5, 0, 0)(0.0) == 0.0);
  for (auto [theta, a, b] : {std::tuple{0.3, 1.0, -1.0}, std::tuple{0.7, -1.0, 1.0}}) {
    CHECK(is_quasiconcave(power_log_rho(theta, a, b).evaluator(), default_check_grid()).ok);
  }
  CHECK_THROWS(power_log_rho(1.0, 0, 0));
  CHECK_THROWS(power_log_rho(0.0, 0, 0));
}

TEST_CASE("concave majorant of a concave function is itself") {
  // The grid infimum converges to rho only as the grid widens: at t it is off
  // by about t / s_max and s_min / t, so the grid must run far past the t checked.
  const auto grid = numeric::decade_grid(1e-16, 1e16, 64);
  const auto tilde = concave_majorant(QuasiConcaveFn::min_one().evaluator(), grid);
  for (double t : numeric::log_grid(1e-4, 1e4, 41)) {
    CHECK(tilde(t) == doctest::Approx(std::min(1.0, t)).epsilon(1e-8));
  }
}

TEST_CASE("concave majorant of max(1,t) is 1+t") {
  const auto tilde = concave_majorant(QuasiConcaveFn::max_one().evaluator(), default_majorant_grid());
  for (double t : numeric::log_grid(1e-6, 1e6, 61)) CHECK(tilde(t) == doctest::Approx(1.0 + t).epsilon(1e-8));
}

TEST_CASE("property: concave majorant sandwich and oracle agreement on random power-log rho") {
  Rng rng(201);
  const auto grid = default_majorant_grid();
  for (int trial = 0; trial < 50; ++trial) {
    const QuasiConcaveFn rho = testing::random_power_log(rng);
    REQUIRE(is_quasiconcave(rho.evaluator(), default_check_grid()).ok);
    const auto tilde = concave_majorant(rho.evaluator(), grid);
    // Concave by construction: the constructor validates slopes.
    for (std::size_t k = 0; k < grid.size(); k += 97) {
      const double t = grid[k];
      CHECK(tilde(t) >= rho(t) * (1.0 - 1e-8));
      CHECK(tilde(t) <= 2.0 * rho(t) * (1.0 + 1e-8));
    }
    for (double t : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
      const double oracle = majorant_oracle(rho.evaluator(), t);
      CHECK(tilde(t) == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("concave majorant dominates rho between grid points") {
  // A kink at t = 0.3, between coarse grid points.
  auto rho = [](double t) { return std::min(t, 0.3) + 0.01 * t; };
  const auto tilde = concave_majorant(rho, numeric::decade_grid(1e-4, 1e4, 3));
  for (double t : numeric::log_grid(1e-3, 1e3, 997)) CHECK(tilde(t) >= rho(t) * (1.0 - 1e-12));
}

TEST_CASE("rho_star examples and involution") {
  const auto star = rho_star(power_log_rho(0.25, 0, 0));
  CHECK(star(16.0) == doctest::Approx(8.0).epsilon(1e-14));
  const auto one = rho_star(QuasiConcaveFn([](double) { return 1.0; }, RhoFamily::Custom));
  CHECK(one(3.5) == 3.5);
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const QuasiConcaveFn rho = testing::random_power_log(rng);
    const auto twice = rho_star(rho_star(rho));
    for (double t : numeric::log_grid(1e-6, 1e6, 25)) CHECK(twice(t) == doctest::Approx(rho(t)).epsilon(1e-12));
    CHECK(is_quasiconcave(rho_star(rho).evaluator(), default_check_grid()).ok);
  }
}

TEST_CASE("rho_star surjectivity report") {
  CHECK(rho_star_surjective(power_log_rho(0.5, 0, 0)).onto);
  const auto min_one = rho_star_surjective(QuasiConcaveFn::min_one());
  CHECK_FALSE(min_one.onto);
  CHECK(min_one.range_hi == doctest::Approx(1.0));
}

TEST_CASE("piecewise linear concave validation") {
  CHECK_THROWS(PiecewiseLinearConcave({1.0, 2.0}, {1.0, 3.0}, 1.0, 0.0));  // slope rises 1 -> 2
  CHECK_THROWS(PiecewiseLinearConcave({2.0, 1.0}, {1.0, 1.0}, 1.0, 0.0));  // knots not increasing
  CHECK_THROWS(PiecewiseLinearConcave({1.0}, {1.0}, 2.0, 0.0));            // negative at 0
  const PiecewiseLinearConcave f({1.0, 3.0}, {2.0, 3.0}, 1.0, 0.25);
  CHECK(f(0.0) == 1.0);
  CHECK(f(2.0) == 2.5);
  CHECK(f(5.0) == 3.5);
  CHECK(f.value_at_zero() == 1.0);
}

TEST_CASE("peetre decomposition examples") {
  const auto min_u1 = peetre_decompose(PiecewiseLinearConcave({1.0}, {1.0}, 1.0, 0.0));
  CHECK(min_u1.a == 0.0);
  CHECK(min_u1.b == 0.0);
  REQUIRE(min_u1.atoms.size() == 1);
  CHECK(min_u1.atoms[0] == PeetreAtom{1.0, 1.0});

  const auto affine = peetre_decompose(PiecewiseLinearConcave({1.0}, {2.0}, 1.0, 1.0));
  CHECK(affine.a == 1.0);
  CHECK(affine.b == 1.0);
  CHECK(affine.atoms.empty());
}

TEST_CASE("property: peetre round trips") {
  Rng rng(203);
  for (int trial = 0; trial < 200; ++trial) {
    const PiecewiseLinearConcave h = testing::random_plc(rng, 5);
    const PeetreRepresentation rep = peetre_decompose(h);
    for (std::size_t k = 0; k < h.knots().size(); ++k) {
      CHECK(rep(h.knots()[k]) == doctest::Approx(h.values()[k]).epsilon(1e-13));
    }
    for (int j = 0; j < 10; ++j) {
      const double u = rng.uniform(0.0, 2.0 * h.knots().back());
      CHECK(rep(u) == doctest::Approx(h(u)).epsilon(1e-12));
    }
    const PeetreRepresentation again = peetre_decompose(rep.reconstruct());
    CHECK(again.a == doctest::Approx(rep.a).epsilon(1e-12));
    CHECK(again.b == doctest::Approx(rep.b).epsilon(1e-12));
    REQUIRE(again.atoms.size() == rep.atoms.size());
    for (std::size_t k = 0; k < rep.atoms.size(); ++k) {
      CHECK(again.atoms[k].t == rep.atoms[k].t);
      CHECK(again.atoms[k].mass == doctest::Approx(rep.atoms[k].mass).epsilon(1e-9));
    }
  }
}

TEST_CASE("property: decompose after reconstruct is exact on dyadic data") {
  // With dyadic locations, masses and coefficients every slope and value is
  // exactly representable, so the round trip must reproduce the fields bit for bit.
  Rng rng(206);
  for (int trial = 0; trial < 200; ++trial) {
    PeetreRepresentation rep;
    rep.a = static_cast<double>(rng.below(9)) / 8.0;
    rep.b = static_cast<double>(rng.below(9)) / 8.0;
    double t = 0.0;
    const std::size_t atoms = rng.below(5);
    for (std::size_t k = 0; k < atoms; ++k) {
      t += static_cast<double>(1 + rng.below(8)) / 4.0;
      rep.atoms.push_back({t, static_cast<double>(1 + rng.below(16)) / 8.0});
    }
    if (rep.atoms.empty() && rep.a == 0.0 && rep.b == 0.0) rep.a = 1.0;
    CHECK(peetre_decompose(rep.reconstruct()) == rep);
  }
}

TEST_CASE("peetre decomposition rejects slope increases") {
  // The constructor already refuses non-concave data, so a slope increase can
  // only come from a hand-built representation with a negative mass.
  PeetreRepresentation rep{0.0, 1.0, {{1.0, -0.5}}};
  CHECK_THROWS((void)rep.reconstruct());
}

TEST_CASE("phi expansion examples and agreement with build_from_h") {
  CHECK(phi_expansion({1.0, 1.0, {}}, 1.0, 2.0, 3.0) == 12.0);
  CHECK(phi_expansion({0.0, 0.0, {{1.0, 1.0}}}, 1.0, 2.0, 2.0) == 2.0);
  Rng rng(204);
  for (int trial = 0; trial < 100; ++trial) {
    const PeetreRepresentation rep = peetre_decompose(testing::random_plc(rng, 1 + rng.below(5)));
    const double p = rng.uniform(1.0, 3.0);
    const double q = p + rng.uniform(0.2, 3.0);
    const OrliczFunction phi = build_from_h(ExponentCouple(p, q), rep.reconstruct());
    const double u = std::exp(rng.uniform(-4.0, 4.0));
    CHECK(phi_expansion(rep, p, q, u) == doctest::Approx(phi(u)).epsilon(1e-10));
  }
}

TEST_CASE("sample builds a concave interpolant") {
  auto f = [](double t) { return std::sqrt(t); };
  const auto plc = PiecewiseLinearConcave::sample(f, {0.25, 1.0, 4.0});
  CHECK(plc(1.0) == 1.0);
  CHECK(plc(4.0) == 2.0);
  CHECK(plc(9.0) >= 3.0);
}
