#pragma once

// Quasi-concave functions on (0, inf): the power-log family, concave
// majorants, the rho_* transform and Peetre representations of piecewise
// linear concave functions.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace orlint {

/// Concave, piecewise linear, nonnegative function on [0, inf). Between knots
/// the function interpolates linearly; left of the first knot it has slope
/// `slope0`, right of the last knot slope `slope_inf`.
class PiecewiseLinearConcave {
 public:
  PiecewiseLinearConcave(std::vector<double> knots, std::vector<double> values, double slope0,
                         double slope_inf);

  /// Interpolates f at the given knots; the end slopes extend the first and
  /// last chords (these chords lie above a concave f outside their interval).
  static PiecewiseLinearConcave sample(const std::function<double(double)>& f,
                                       std::vector<double> knots);

  [[nodiscard]] double operator()(double u) const;

  [[nodiscard]] std::span<const double> knots() const { return knots_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double slope0() const { return slope0_; }
  [[nodiscard]] double slope_inf() const { return slope_inf_; }
  /// Limit of the function at 0+.
  [[nodiscard]] double value_at_zero() const;
  /// Slope on segment k: k = 0 is left of the first knot, k = knots().size()
  /// is right of the last one.
  [[nodiscard]] double segment_slope(std::size_t k) const;

  friend bool operator==(const PiecewiseLinearConcave&, const PiecewiseLinearConcave&) = default;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double slope0_;
  double slope_inf_;
};

struct PeetreAtom {
  double t;
  double mass;
  friend bool operator==(const PeetreAtom&, const PeetreAtom&) = default;
};

/// h(u) = a + b u + sum_i m_i min(u, t_i).
struct PeetreRepresentation {
  double a = 0.0;
  double b = 0.0;
  std::vector<PeetreAtom> atoms;

  [[nodiscard]] double operator()(double u) const;
  /// The piecewise linear concave function this representation describes.
  [[nodiscard]] PiecewiseLinearConcave reconstruct() const;

  friend bool operator==(const PeetreRepresentation&, const PeetreRepresentation&) = default;
};

enum class RhoFamily { PowerLog, MinOne, MaxOne, PiecewiseLinear, Custom };

std::string to_string(RhoFamily family);

/// A positive function on (0, inf) expected to be quasi-concave. The family
/// tag and parameters are kept so specs can be echoed back.
class QuasiConcaveFn {
 public:
  QuasiConcaveFn(std::function<double(double)> evaluator, RhoFamily family,
                 std::vector<double> params = {});

  static QuasiConcaveFn min_one();
  static QuasiConcaveFn max_one();
  static QuasiConcaveFn piecewise_linear(const PiecewiseLinearConcave& f);

  [[nodiscard]] double operator()(double t) const { return evaluator_(t); }
  [[nodiscard]] RhoFamily family() const { return family_; }
  [[nodiscard]] std::span<const double> params() const { return params_; }
  [[nodiscard]] const std::function<double(double)>& evaluator() const { return evaluator_; }

 private:
  std::function<double(double)> evaluator_;
  RhoFamily family_;
  std::vector<double> params_;
};

struct ShapeCheck {
  bool ok = false;
  /// Largest relative violation found (0 when none).
  double worst_violation = 0.0;
  double worst_at = 0.0;
};

/// Default log grid for shape checks: 32 points per decade over [1e-8, 1e8].
std::vector<double> default_check_grid();

/// Nondecreasing with rho(t)/t nonincreasing on the grid, within 1e-10
/// relative slack. Throws std::domain_error on a non-positive value.
ShapeCheck is_quasiconcave(const std::function<double(double)>& rho, std::span<const double> grid);

/// Chord slopes between consecutive grid points are nonincreasing.
ShapeCheck is_concave(const std::function<double(double)>& rho, std::span<const double> grid,
                      double rel_tol = 1e-9);

/// rho(t) = t^theta [ln(e + t)]^a [ln(e + 1/t)]^b, with rho(0) = 0.
QuasiConcaveFn power_log_rho(double theta, double a, double b);

/// Grid used by concave_majorant by default: 512 points per decade on [1e-8, 1e8].
std::vector<double> default_majorant_grid();

/// Concave majorant inf_{s>0} (1 + t/s) rho(s) with s restricted to the grid.
/// Each s contributes the line t -> rho(s) + t rho(s)/s, so the result is the
/// lower envelope of these lines: concave, piecewise linear, and >= rho at
/// every t > 0.
PiecewiseLinearConcave concave_majorant(const std::function<double(double)>& rho,
                                        std::span<const double> grid);

/// t -> t rho(1/t).
QuasiConcaveFn rho_star(const QuasiConcaveFn& rho);

struct SurjectivityCheck {
  bool onto = false;
  double range_lo = 0.0;
  double range_hi = 0.0;
};

/// Reports whether rho_* spans [1e-10, 1e10] on a wide log grid.
SurjectivityCheck rho_star_surjective(const QuasiConcaveFn& rho);

/// a_h = h(0+), b_h = final slope, atoms at knots carrying the slope drops.
PeetreRepresentation peetre_decompose(const PiecewiseLinearConcave& h);

/// a u^q + b u^p + sum_i m_i min(u^p, t_i u^q).
double phi_expansion(const PeetreRepresentation& rep, double p, double q, double u);

}  // namespace orlint
