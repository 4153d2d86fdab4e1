#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "orlint/operators.hpp"

using namespace orlint;

namespace {

constexpr double kInfR = std::numeric_limits<double>::infinity();
const double kExponents[] = {1.0, 1.5, 2.0, 3.0, kInfR};

std::vector<CertifiedOperator> shipped(const SpacePtr& s) {
  const std::size_t n = s->size();
  std::vector<double> half(n, 0.5);
  std::vector<double> mask(n, 0.0);
  for (std::size_t i = 0; i < n; i += 2) mask[i] = 1.0;
  return {identity_operator(s),
          averaging_operator(s),
          shift_operator(s, 0.9),
          multiplier(s, half),
          multiplier(s, mask, "truncation"),
          max_of({identity_operator(s), shift_operator(s, 0.9), averaging_operator(s)}),
          discrete_maximal(s)};
}

}  // namespace

TEST_CASE("contractive matrices") {
  const auto s = DiscreteMeasureSpace::uniform(4);
  const auto id = identity_operator(s);
  const SampleFunction x(s, {1, -2, 3, 0.5});
  CHECK(std::ranges::equal(id(x).values(), x.values()));
  for (double r : kExponents) {
    CHECK(id.bound(r) == 1.0);
    CHECK(averaging_operator(s).bound(r) == doctest::Approx(1.0));
    CHECK(shift_operator(s, 0.9).bound(r) == doctest::Approx(0.9));
  }
  CHECK(shift_operator(s, 0.9)(x)[0] == doctest::Approx(-1.8));
  CHECK_THROWS(contractive_matrix(s, Matrix(4, std::vector<double>(4, 0.3))));
  CHECK_THROWS(contractive_matrix(DiscreteMeasureSpace::make({1, 2}), Matrix{{1, 0}, {0, 1}}));
  // Row sums 1, column sums 2 and 0: bound interpolates 2^(1/r).
  const auto skew = contractive_matrix(DiscreteMeasureSpace::uniform(2), Matrix{{0.5, 0}, {0.5, 0}});
  CHECK(skew.bound(1.0) == doctest::Approx(1.0));
  CHECK(skew.kind() == OperatorKind::Linear);
  CHECK(skew.certificate().find("column") != std::string::npos);
}

TEST_CASE("multipliers") {
  const auto s = DiscreteMeasureSpace::uniform(3);
  CHECK(multiplier(s, {1, 1, 1}).bound(2.0) == 1.0);
  CHECK(multiplier(s, {0.5, -0.25, 0}).bound(kInfR) == 0.5);
  CHECK_THROWS(multiplier(s, {1.5, 0, 0}));
  CHECK_THROWS(multiplier(s, {1, 1}));
  const auto m = multiplier(s, {0.5, -0.25, 0});
  CHECK(estimate_norm(m, 2.0, 20, 1) == doctest::Approx(0.5));
  CHECK(estimate_norm(identity_operator(s), 1.5, 20, 1) == 1.0);
}

TEST_CASE("max_of") {
  const auto s = DiscreteMeasureSpace::uniform(3);
  const auto abs = max_of({identity_operator(s)});
  const SampleFunction x(s, {-1, 2, -3});
  CHECK(abs(x)[0] == 1.0);
  CHECK(abs(x)[2] == 3.0);
  CHECK(abs.bound(2.0) == 1.0);
  CHECK(abs.kind() == OperatorKind::Sublinear);

  const auto scaled = max_of({multiplier(s, {0.5, 0.5, 0.5}), multiplier(s, {0.25, 0.25, 0.25})});
  CHECK(scaled(x)[1] == 1.0);
  CHECK(scaled.bound(2.0) == doctest::Approx(std::sqrt(0.25 + 0.0625)));
  CHECK(scaled.bound(kInfR) == 0.5);
  CHECK(estimate_norm(scaled, 2.0, 20, 2) <= scaled.bound(2.0));
  CHECK(estimate_norm(scaled, 2.0, 20, 2) == doctest::Approx(0.5));

  const auto nested = max_of({abs});
  CHECK(nested.kind() == OperatorKind::Subadditive);
  CHECK_THROWS(max_of({}));
  CHECK_THROWS(max_of({identity_operator(s), identity_operator(DiscreteMeasureSpace::uniform(4))}));
}

TEST_CASE("discrete maximal operator examples") {
  const auto s = DiscreteMeasureSpace::uniform(4);
  const auto m = discrete_maximal(s);
  const auto c = m(SampleFunction(s, {-2, -2, -2, -2}));
  for (double v : c.values()) CHECK(v == 2.0);
  const auto spike = m(SampleFunction(s, {1, 0, 0, 0}));
  for (std::size_t i = 0; i < 4; ++i) CHECK(spike[i] == doctest::Approx(1.0 / static_cast<double>(i + 1)));
  CHECK(m.bound(kInfR) == 1.0);
  CHECK(m.kind() == OperatorKind::Sublinear);
  // Both certificate routes are upper bounds; the B1 route is the smaller here.
  CHECK(m.bound(1.0) <= 10.0);
  CHECK(m.bound(1.0) >= estimate_norm(m, 1.0, 50, 3));
}

TEST_CASE("discrete maximal equals max_of over window averages") {
  Rng rng(401);
  const std::size_t n = 6;
  const auto s = DiscreteMeasureSpace::uniform(n);
  std::vector<CertifiedOperator> windows;
  for (std::size_t lo = 0; lo < n; ++lo) {
    for (std::size_t hi = lo; hi < n; ++hi) {
      Matrix a(n, std::vector<double>(n, 0.0));
      const double w = 1.0 / static_cast<double>(hi - lo + 1);
      for (std::size_t i = lo; i <= hi; ++i) {
        for (std::size_t j = lo; j <= hi; ++j) a[i][j] = w;
      }
      windows.push_back(contractive_matrix(s, a));
    }
  }
  const auto composed = max_of(windows);
  const auto direct = discrete_maximal(s);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = testing::random_function(rng, s);
    std::vector<double> mag(x.values().begin(), x.values().end());
    for (auto& v : mag) v = std::abs(v);
    const auto a = composed(x.with_values(mag));
    const auto b = direct(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
  }
  for (double r : kExponents) CHECK(direct.bound(r) <= composed.bound(r) * (1.0 + 1e-12));
}

TEST_CASE("property: shipped operators are subadditive, within their certificates") {
  const auto s = DiscreteMeasureSpace::uniform(8);
  std::uint64_t seed = 500;
  for (const auto& op : shipped(s)) {
    CAPTURE(op.name());
    const auto probe = probe_subadditivity(op, 1000, ++seed);
    CHECK(probe.ok);
    CHECK(probe.probes == 1000);
    for (double r : kExponents) {
      CAPTURE(r);
      CHECK(estimate_norm(op, r, 200, ++seed) <= op.bound(r) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("property: max_of of linear contractions is homogeneous") {
  const auto s = DiscreteMeasureSpace::uniform(8);
  const auto op = max_of({shift_operator(s, 0.9), averaging_operator(s)});
  CHECK(probe_homogeneity(op, 500, 7).ok);
  CHECK(probe_homogeneity(discrete_maximal(s), 500, 8).ok);
}

TEST_CASE("property: maximal dominates the average and is dominated by the sup") {
  Rng rng(402);
  const auto s = DiscreteMeasureSpace::uniform(7);
  const auto m = discrete_maximal(s);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = testing::random_function(rng, s);
    const auto mx = m(x);
    const double mean = lp_integral(x, 1.0) / s->total_measure();
    for (double v : mx.values()) {
      CHECK(v >= mean * (1.0 - 1e-14));
      CHECK(v <= sup_norm(x) * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("a non-subadditive map fails the probe") {
  const auto s = DiscreteMeasureSpace::uniform(3);
  const CertifiedOperator square("square", OperatorKind::Subadditive, s,
                                 [](const SampleFunction& x) {
                                   std::vector<double> v(x.size());
                                   for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i] * x[i];
                                   return x.with_values(v);
                                 },
                                 [](double) { return 1.0; }, "none");
  CHECK_FALSE(probe_subadditivity(square, 200, 1).ok);
}

TEST_CASE("scaled bounds") {
  const auto s = DiscreteMeasureSpace::uniform(3);
  const auto half = discrete_maximal(s).with_scaled_bounds(0.5);
  CHECK(half.bound(kInfR) == 0.5);
  CHECK(half.certificate().find("scaled") != std::string::npos);
  CHECK(half.admissible_bound(ExponentCouple(2, kInfR)) == doctest::Approx(0.5 * discrete_maximal(s).bound(2)));
}
