#pragma once

// Orlicz functions, the modular, and the Luxemburg-Nakano and Orlicz
// (Amemiya) norms on finite discrete measure spaces.

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orlint/measure.hpp"
#include "orlint/quasiconcave.hpp"

namespace orlint {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent pair with 1 <= p < q <= inf.
struct ExponentCouple {
  double p = 1.0;
  double q = 2.0;

  ExponentCouple() = default;
  ExponentCouple(double p_, double q_);

  [[nodiscard]] bool q_infinite() const { return q == kInf; }
  friend bool operator==(const ExponentCouple&, const ExponentCouple&) = default;
};

/// A finite-valued Orlicz function phi on [0, u_max].
class OrliczFunction {
 public:
  enum class Kind { Power, Generator, ConcaveH, Tabulated };

  static OrliczFunction power(double p);
  /// Piecewise linear through (0,0) and the given points.
  static OrliczFunction tabulated(std::vector<double> grid, std::vector<double> values);

  /// phi(u); throws DomainOverflow when u > u_max().
  [[nodiscard]] double operator()(double u) const;
  /// phi(u), or +inf when u > u_max().
  [[nodiscard]] double eval_or_inf(double u) const;

  [[nodiscard]] double u_max() const;
  [[nodiscard]] Kind kind() const;
  /// Exponent couple of Generator and ConcaveH functions.
  [[nodiscard]] std::optional<ExponentCouple> couple() const;
  /// The h of a ConcaveH function.
  [[nodiscard]] const PiecewiseLinearConcave* concave_h() const;
  /// For Generator functions: u -> u^(1/p) rho(u^(1/q - 1/p)), i.e. phi^{-1}.
  [[nodiscard]] double generator_inverse(double u) const;
  /// True when a Generator's inverse flattens, i.e. phi jumps to +inf past u_max.
  [[nodiscard]] bool truncated() const;

  struct Impl;

 private:
  explicit OrliczFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend OrliczFunction build_from_generator(const ExponentCouple&, const QuasiConcaveFn&);
  friend OrliczFunction build_from_h(const ExponentCouple&, const PiecewiseLinearConcave&);

  std::shared_ptr<const Impl> impl_;
};

/// phi with phi^{-1}(u) = u^(1/p) rho(u^(1/q - 1/p)); for q = inf the
/// exponent is -1/p. rho must be concave and quasi-concave. The inverse is
/// tabulated at 4096 points per decade on u in [1e-12, 1e12] and inverted by
/// monotone cubic interpolation in log-log coordinates. A flat tail of the
/// inverse marks the point where phi becomes infinite, and becomes u_max.
OrliczFunction build_from_generator(const ExponentCouple& couple, const QuasiConcaveFn& rho);

/// phi(u) = u^q h(u^(p-q)), q finite.
OrliczFunction build_from_h(const ExponentCouple& couple, const PiecewiseLinearConcave& h);

/// h(s) = phi(u) u^(-q) with u = s^(1/(p-q)), so that phi(u) = u^q h(u^(p-q)).
std::function<double(double)> lemma_h(const OrliczFunction& phi, const ExponentCouple& couple);

/// Sum of phi(|x_i|) w_i. Throws DomainOverflow when |x_i| > u_max.
double modular(const OrliczFunction& phi, const SampleFunction& x);
/// Integral of phi over the steps of a rearrangement.
double modular(const OrliczFunction& phi, const StepFunction& x);
/// As modular, but +inf instead of throwing on domain overflow.
double modular_or_inf(const OrliczFunction& phi, const SampleFunction& x, double scale = 1.0);

/// inf{lambda > 0 : I_phi(x / lambda) <= 1}, by bracketing and bisection.
double luxemburg_norm(const OrliczFunction& phi, const SampleFunction& x);

/// inf_{k>0} (1 + I_phi(k x)) / k.
double amemiya_norm(const OrliczFunction& phi, const SampleFunction& x);

struct ConvexityCheck {
  bool ok = false;
  /// Most negative centered second difference.
  double worst_second_difference = 0.0;
  double worst_at = 0.0;
};

/// Centered second differences on a uniform grid (>= 100 points) must be
/// >= -1e-8 max|f|.
ConvexityCheck check_convexity(const std::function<double(double)>& f, std::span<const double> grid);

/// Grid supremum of phi(2u)/phi(u).
double check_delta2(const OrliczFunction& phi, std::span<const double> grid);

}  // namespace orlint
