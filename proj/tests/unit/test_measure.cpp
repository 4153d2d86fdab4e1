#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "orlint/error.hpp"
#include "orlint/measure.hpp"

using namespace orlint;

namespace {

SampleFunction unit(std::vector<double> v) { return {DiscreteMeasureSpace::uniform(v.size()), std::move(v)}; }

}  // namespace

TEST_CASE("measure spaces reject non-positive weights") {
  CHECK_THROWS_AS(DiscreteMeasureSpace({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasureSpace({-1.0}), std::invalid_argument);
  CHECK(DiscreteMeasureSpace({0.5, 2.0}).total_measure() == 2.5);
}

TEST_CASE("sample functions need one finite value per atom") {
  auto space = DiscreteMeasureSpace::uniform(2);
  CHECK_THROWS(SampleFunction(space, {1.0}));
  CHECK_THROWS(SampleFunction(space, {1.0, NAN}));
}

TEST_CASE("rearrangement examples") {
  SUBCASE("sorted absolute values") {
    const auto r = rearrangement(unit({3, 1, 2}));
    CHECK(std::vector<double>(r.levels().begin(), r.levels().end()) == std::vector<double>{3, 2, 1});
    CHECK(std::vector<double>(r.breakpoints().begin(), r.breakpoints().end()) == std::vector<double>{1, 2, 3});
  }
  SUBCASE("constant merges into one level") {
    const auto r = rearrangement(unit({-1.5, 1.5, 1.5, -1.5}));
    CHECK(r.steps() == 1);
    CHECK(r.levels()[0] == 1.5);
    CHECK(r.total_measure() == 4.0);
  }
  SUBCASE("weighted") {
    const SampleFunction x(DiscreteMeasureSpace::make({0.5, 2.0}), {-2.0, 4.0});
    const auto r = rearrangement(x);
    CHECK(std::vector<double>(r.levels().begin(), r.levels().end()) == std::vector<double>{4, 2});
    CHECK(std::vector<double>(r.breakpoints().begin(), r.breakpoints().end()) == std::vector<double>{2, 2.5});
  }
  SUBCASE("step function is right continuous and zero past the end") {
    const auto r = rearrangement(unit({3, 1, 2}));
    CHECK(r(0.0) == 3.0);
    CHECK(r(1.0) == 2.0);
    CHECK(r(2.999) == 1.0);
    CHECK(r(3.0) == 0.0);
  }
}

TEST_CASE("lp integrals and sup norm") {
  CHECK(lp_integral(unit({1, 2}), 2.0) == 5.0);
  CHECK(lp_integral(unit({0, 0}), 1.5) == 0.0);
  CHECK(sup_norm(unit({-3, 1})) == 3.0);
  CHECK(sup_norm(unit({0, 0})) == 0.0);
  const auto x = unit({1, 2, 4});
  CHECK(std::pow(lp_integral(x, 200.0), 1.0 / 200.0) == doctest::Approx(sup_norm(x)).epsilon(0.01));
  CHECK(lp_norm(x, std::numeric_limits<double>::infinity()) == 4.0);
}

TEST_CASE("property: lp_integral is rearrangement invariant") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto space = testing::random_space(rng, 1 + rng.below(12));
    const auto x = testing::random_function(rng, space);
    const auto r = rearrangement(x);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      CHECK(lp_integral(r, p) == doctest::Approx(lp_integral(x, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: rearrangement is idempotent") {
  Rng rng(102);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = testing::random_function(rng, testing::random_space(rng, 1 + rng.below(10)));
    const auto r = rearrangement(x);
    const auto again = rearrangement(r.to_sample());
    REQUIRE(again.steps() == r.steps());
    for (std::size_t k = 0; k < r.steps(); ++k) {
      CHECK(again.levels()[k] == r.levels()[k]);
      CHECK(again.breakpoints()[k] == doctest::Approx(r.breakpoints()[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("hardy majorization examples") {
  const auto x = unit({1, 1});
  const auto y = unit({2, 0});
  CHECK(hardy_majorizes(x, x, 1.0).holds);
  CHECK(hardy_majorizes(x, x, 1.0).worst_margin == 0.0);
  CHECK(hardy_majorizes(x, y, 1.0).holds);
  const auto back = hardy_majorizes(y, x, 1.0);
  CHECK_FALSE(back.holds);
  CHECK(back.worst_t == 1.0);
  CHECK(back.worst_margin == -1.0);
  CHECK_THROWS(hardy_majorizes(unit({1}), unit({1, 1}), 1.0));
}

TEST_CASE("hardy majorization checks between breakpoints of different spaces") {
  // x* = 2 on [0, 0.5); y* = 1.5 on [0, 1). At t = 0.5: 1 vs 0.75, fails.
  const SampleFunction x(DiscreteMeasureSpace::make({0.5, 0.5}), {2.0, 0.0});
  const SampleFunction y(DiscreteMeasureSpace::make({1.0}), {1.5});
  const auto r = hardy_majorizes(x, y, 1.0);
  CHECK_FALSE(r.holds);
  CHECK(r.worst_t == 0.5);
}

TEST_CASE("property: hardy majorization is reflexive and transitive") {
  Rng rng(103);
  int chains = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto space = DiscreteMeasureSpace::uniform(1 + rng.below(5));
    auto draw = [&] {
      std::vector<double> v(space->size());
      for (auto& e : v) e = static_cast<double>(rng.below(4));
      return SampleFunction(space, v);
    };
    const auto a = draw();
    const auto b = draw();
    const auto c = draw();
    const double p = rng.uniform() < 0.5 ? 1.0 : 2.0;
    CHECK(hardy_majorizes(a, a, p).holds);
    if (hardy_majorizes(a, b, p).holds && hardy_majorizes(b, c, p).holds) {
      ++chains;
      CHECK(hardy_majorizes(a, c, p).holds);
    }
  }
  CHECK(chains > 50);
}

TEST_CASE("function csv round trip and errors") {
  std::istringstream in("\xEF\xBB\xBFweight,value\n0.5,-2\n2,4\n");
  const auto x = read_function_csv(in);
  CHECK(x.size() == 2);
  CHECK(x.weight(0) == 0.5);
  CHECK(x[1] == 4.0);
  std::ostringstream out;
  write_function_csv(out, x);
  std::istringstream again(out.str());
  const auto y = read_function_csv(again);
  CHECK(std::equal(x.values().begin(), x.values().end(), y.values().begin()));

  std::istringstream bad_header("w,v\n1,1\n");
  CHECK_THROWS_AS(read_function_csv(bad_header), SpecError);
  std::istringstream bad_weight("weight,value\n0,1\n");
  CHECK_THROWS_AS(read_function_csv(bad_weight), SpecError);
  std::istringstream bad_row("weight,value\n1\n");
  CHECK_THROWS_AS(read_function_csv(bad_row), SpecError);
}
