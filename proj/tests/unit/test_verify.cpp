#include <doctest.h>

#include <cmath>

#include "orlint/constants.hpp"
#include "orlint/error.hpp"
#include "orlint/verify.hpp"

using namespace orlint;
using io::Json;

namespace {

Scenario thm46a(int count, double scale, const char* op = R"({"kind":"maximal"})") {
  auto j = Json::parse(R"({"theorem":"thm46a","couple":[1,2],
    "phi":{"kind":"h","p":1,"q":2,"h":{"knots":[1],"values":[2],"slope0":1,"slope_inf":1}},
    "inputs":{"seed":20011}})");
  j["operator"] = Json::parse(op);
  j["inputs"]["count"] = count;
  j["bound_scale"] = scale;
  return Scenario::from_json(j);
}

std::vector<SampleFunction> inputs(int count, std::uint64_t seed, int atoms = 6) {
  InputSpec spec;
  spec.count = count;
  spec.atoms = atoms;
  spec.seed = seed;
  return generate_inputs(spec, DiscreteMeasureSpace::uniform(static_cast<std::size_t>(atoms)));
}

}  // namespace

TEST_CASE("scenario parsing") {
  CHECK_THROWS_AS(Scenario::from_json(Json::parse(R"({"theorem":"prop22","couple":[2,"inf"],
      "operator":{"kind":"identity"},"inputs":{"count":3}})")),
                  SpecError);
  CHECK_THROWS_AS(Scenario::from_json(Json::parse(R"({"theorem":"thm99","couple":[1,2],"inputs":{"seed":1}})")),
                  SpecError);
  CHECK_THROWS_AS(Scenario::from_json(Json::parse(R"({"theorem":"sparr_lemma","couple":[1,2],
      "inputs":{"seed":1},"colour":"red"})")),
                  SpecError);
  const auto s = thm46a(10, 1.0);
  CHECK(Scenario::from_json(s.to_json()).to_json() == s.to_json());
  CHECK(s.tolerances.relative == 1e-9);
  const auto r = s.refined();
  CHECK(r.inputs.count == 20);
  CHECK(r.t_grid.points == 128);
}

TEST_CASE("k-contraction examples") {
  const auto xs = inputs(50, 1);
  const auto s = xs.front().space();
  const std::vector<double> grid{0.01, 0.1, 1, 10, 100};
  for (const auto& couple : {ExponentCouple(2, kInf), ExponentCouple(1, 2)}) {
    const auto id = verify_k_contraction(identity_operator(s), xs, couple, grid, {});
    CHECK(id.passed());
    CHECK(id.worst_margin <= 1e-12);
    const auto half = verify_k_contraction(multiplier(s, std::vector<double>(s->size(), 0.5)), xs, couple, grid, {});
    CHECK(half.passed());
    CHECK(std::abs(half.worst_margin) <= 1e-12);
  }
  CHECK(verify_k_contraction(discrete_maximal(s), xs, ExponentCouple(2, kInf), grid, {}).passed());
  const auto planted =
      verify_k_contraction(discrete_maximal(s).with_scaled_bounds(0.5), xs, ExponentCouple(2, kInf), grid, {});
  CHECK_FALSE(planted.passed());
  CHECK(planted.witness.has_value());
}

TEST_CASE("sparr implication examples and neutrality") {
  const auto xs = inputs(40, 2);
  std::vector<SampleFunction> doubled;
  for (const auto& x : xs) {
    std::vector<double> v(x.values().begin(), x.values().end());
    for (auto& e : v) e *= 2.0;
    doubled.push_back(x.with_values(v));
  }
  const auto grid = TGrid{}.values();
  const ExponentCouple c(1.5, 3);
  const auto same = verify_sparr_implication(xs, xs, c, grid, {});
  CHECK(same.passed());
  CHECK(same.hypothesis_met == 40);
  const auto up = verify_sparr_implication(xs, doubled, c, grid, {});
  CHECK(up.passed());
  CHECK(up.hypothesis_met == 40);
  // Reversed pairs break the hypothesis; neutral, never a failure.
  const auto down = verify_sparr_implication(doubled, xs, c, grid, {});
  CHECK(down.passed());
  CHECK(down.hypothesis_met == 0);
  CHECK(down.violation_count == 0);
}

TEST_CASE("modular examples") {
  const auto xs = inputs(60, 3);
  const auto s = xs.front().space();
  const auto phi = build_from_generator(ExponentCouple(1, kInf), QuasiConcaveFn::min_one());
  std::vector<SampleFunction> small;
  for (const auto& x : xs) {
    const double m = sup_norm(x);
    std::vector<double> v(x.values().begin(), x.values().end());
    if (m > 0.0) {
      for (auto& e : v) e *= 0.4 / m;
    }
    small.push_back(x.with_values(v));
  }
  std::vector<double> mask(s->size(), 0.0);
  mask[0] = 1.0;
  CHECK(verify_modular_lp_linf(phi, 1.0, identity_operator(s), small, {}).passed());
  CHECK(verify_modular_lp_linf(phi, 1.0, multiplier(s, mask, "truncation"), small, {}).passed());

  const auto h = build_from_h(ExponentCouple(1, 2), PiecewiseLinearConcave({1.0}, {2.0}, 1.0, 1.0));
  CHECK(verify_modular_lp_lq(h, ExponentCouple(1, 2), identity_operator(s), xs, {}).passed());
  CHECK(verify_modular_lp_lq(h, ExponentCouple(1, 2), averaging_operator(s), xs, {}).passed());
}

TEST_CASE("norm interpolation examples") {
  const auto xs = inputs(30, 4);
  const auto s = xs.front().space();
  const auto phi = build_from_generator(ExponentCouple(1.5, 2), power_log_rho(0.5, 0, 0));
  Tolerances tol;
  tol.relative = 1e-8;
  for (auto source : {ConstantSource::Subadditive, ConstantSource::Linear}) {
    CHECK(verify_norm_interpolation(phi, ExponentCouple(1.5, 2), identity_operator(s), xs, source, tol).passed());
  }
  CHECK(interpolation_constant(ConstantSource::Linear, ExponentCouple(1.5, 2), identity_operator(s)) < 2.0);
  CHECK_THROWS_AS(interpolation_constant(ConstantSource::Linear, ExponentCouple(1.5, 2), discrete_maximal(s)),
                  SpecError);
  CHECK(interpolation_constant(ConstantSource::LpLinf, ExponentCouple(2, kInf), identity_operator(s)) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("run_scenario examples") {
  const auto smoke = run_scenario(thm46a(10, 1.0));
  CHECK(smoke.passed());
  CHECK(smoke.trials == 10);
  CHECK(smoke.wall_ms < 1000.0);
  const auto ident = run_scenario(thm46a(50, 1.0, R"({"kind":"identity"})"));
  CHECK(ident.passed());
  CHECK(ident.violation_count == 0);
}

TEST_CASE("negative control: halved certificate is detected") {
  const auto bad = run_scenario(thm46a(500, 0.5));
  CHECK(bad.status == Status::Fail);
  CHECK(bad.violation_count >= 1);
  CHECK(bad.witness.has_value());
  CHECK(bad.violations.front().input_index == bad.witness->at("input_index").get<int>());
}

TEST_CASE("reports do not depend on the job count") {
  const auto s = thm46a(200, 0.5);
  const auto one = run_scenario(s, {1}).to_json(false);
  const auto four = run_scenario(s, {4}).to_json(false);
  const auto seven = run_scenario(s, {7}).to_json(false);
  CHECK(one.dump() == four.dump());
  CHECK(one.dump() == seven.dump());
}

TEST_CASE("inputs depend only on seed and index") {
  const auto a = inputs(20, 77);
  const auto b = inputs(5, 77);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::ranges::equal(a[i].values(), b[i].values()));
  const auto c = inputs(5, 78);
  CHECK_FALSE(std::ranges::equal(a[0].values(), c[0].values()));
}
