#include "orlint/quasiconcave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "orlint/numeric.hpp"

namespace orlint {

namespace {

constexpr double kValueTol = 1e-12;

double lerp_at(double t0, double v0, double t1, double v1, double u) {
  return v0 + (v1 - v0) * ((u - t0) / (t1 - t0));
}

}  // namespace

PiecewiseLinearConcave::PiecewiseLinearConcave(std::vector<double> knots, std::vector<double> values,
                                               double slope0, double slope_inf)
    : knots_(std::move(knots)), values_(std::move(values)), slope0_(slope0), slope_inf_(slope_inf) {
  if (knots_.empty() || knots_.size() != values_.size()) {
    throw std::invalid_argument("piecewise linear concave: need matching, nonempty knots and values");
  }
  double scale = std::abs(slope0_) * knots_.front();
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    if (!(knots_[k] > 0.0) || !std::isfinite(knots_[k]) || !std::isfinite(values_[k])) {
      throw std::invalid_argument("piecewise linear concave: knots must be positive and finite");
    }
    if (k > 0 && !(knots_[k] > knots_[k - 1])) {
      throw std::invalid_argument("piecewise linear concave: knots must strictly increase");
    }
    scale = std::max(scale, std::abs(values_[k]));
  }
  if (!std::isfinite(slope0_) || !std::isfinite(slope_inf_)) {
    throw std::invalid_argument("piecewise linear concave: end slopes must be finite");
  }
  const double tol = kValueTol * std::max(scale, 1e-300);
  // Concavity, phrased on values so that nearly coincident knots stay well conditioned.
  for (std::size_t k = 1; k + 1 < knots_.size(); ++k) {
    const double chord = lerp_at(knots_[k - 1], values_[k - 1], knots_[k + 1], values_[k + 1], knots_[k]);
    if (values_[k] < chord - tol) throw std::invalid_argument("piecewise linear concave: not concave");
  }
  if (knots_.size() >= 2) {
    const std::size_t n = knots_.size();
    const double first_rise = values_[1] - values_[0];
    const double last_rise = values_[n - 1] - values_[n - 2];
    if (slope0_ * (knots_[1] - knots_[0]) < first_rise - tol ||
        slope_inf_ * (knots_[n - 1] - knots_[n - 2]) > last_rise + tol) {
      throw std::invalid_argument("piecewise linear concave: not concave");
    }
  } else if (slope_inf_ > slope0_ + kValueTol * std::max(std::abs(slope0_), std::abs(slope_inf_))) {
    throw std::invalid_argument("piecewise linear concave: not concave");
  }
  if (values_.front() - slope0_ * knots_.front() < -tol || slope_inf_ < 0.0) {
    throw std::invalid_argument("piecewise linear concave: must be nonnegative");
  }
}

PiecewiseLinearConcave PiecewiseLinearConcave::sample(const std::function<double(double)>& f,
                                                      std::vector<double> knots) {
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  if (knots.size() < 2) throw std::invalid_argument("sampling needs at least two knots");
  std::vector<double> values(knots.size());
  std::transform(knots.begin(), knots.end(), values.begin(), f);
  const std::size_t n = knots.size();
  const double s0 = (values[1] - values[0]) / (knots[1] - knots[0]);
  const double sinf = (values[n - 1] - values[n - 2]) / (knots[n - 1] - knots[n - 2]);
  return {std::move(knots), std::move(values), s0, sinf};
}

double PiecewiseLinearConcave::operator()(double u) const {
  // Left of the first knot, h(0) + slope0 u keeps relative accuracy as u -> 0.
  if (u < knots_.front()) return value_at_zero() + slope0_ * u;
  if (u == knots_.front()) return values_.front();
  if (u >= knots_.back()) return values_.back() + slope_inf_ * (u - knots_.back());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  const auto k = static_cast<std::size_t>(it - knots_.begin());
  return lerp_at(knots_[k - 1], values_[k - 1], knots_[k], values_[k], u);
}

double PiecewiseLinearConcave::value_at_zero() const {
  return std::max(0.0, values_.front() - slope0_ * knots_.front());
}

double PiecewiseLinearConcave::segment_slope(std::size_t k) const {
  if (k == 0) return slope0_;
  if (k >= knots_.size()) return slope_inf_;
  return (values_[k] - values_[k - 1]) / (knots_[k] - knots_[k - 1]);
}

double PeetreRepresentation::operator()(double u) const {
  double h = a + b * u;
  for (const auto& atom : atoms) h += atom.mass * std::min(u, atom.t);
  return h;
}

PiecewiseLinearConcave PeetreRepresentation::reconstruct() const {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("Peetre representation needs a, b >= 0");
  std::vector<PeetreAtom> sorted = atoms;
  std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) { return l.t < r.t; });
  std::vector<double> knots;
  double total_mass = 0.0;
  for (const auto& atom : sorted) {
    if (!(atom.t > 0.0) || !(atom.mass > 0.0)) {
      throw std::invalid_argument("Peetre atoms need positive location and mass");
    }
    total_mass += atom.mass;
    if (knots.empty() || knots.back() != atom.t) knots.push_back(atom.t);
  }
  if (knots.empty()) knots.push_back(1.0);
  std::vector<double> values(knots.size());
  std::transform(knots.begin(), knots.end(), values.begin(), [this](double t) { return (*this)(t); });
  return {std::move(knots), std::move(values), b + total_mass, b};
}

std::string to_string(RhoFamily family) {
  switch (family) {
    case RhoFamily::PowerLog: return "power_log";
    case RhoFamily::MinOne: return "min_one";
    case RhoFamily::MaxOne: return "max_one";
    case RhoFamily::PiecewiseLinear: return "plc";
    case RhoFamily::Custom: return "custom";
  }
  return "custom";
}

QuasiConcaveFn::QuasiConcaveFn(std::function<double(double)> evaluator, RhoFamily family,
                               std::vector<double> params)
    : evaluator_(std::move(evaluator)), family_(family), params_(std::move(params)) {
  if (!evaluator_) throw std::invalid_argument("quasi-concave function needs an evaluator");
}

QuasiConcaveFn QuasiConcaveFn::min_one() {
  return {[](double t) { return std::min(1.0, t); }, RhoFamily::MinOne};
}

QuasiConcaveFn QuasiConcaveFn::max_one() {
  return {[](double t) { return std::max(1.0, t); }, RhoFamily::MaxOne};
}

QuasiConcaveFn QuasiConcaveFn::piecewise_linear(const PiecewiseLinearConcave& f) {
  return {[f](double t) { return f(t); }, RhoFamily::PiecewiseLinear};
}

std::vector<double> default_check_grid() { return numeric::decade_grid(1e-8, 1e8, 32); }

ShapeCheck is_quasiconcave(const std::function<double(double)>& rho, std::span<const double> grid) {
  if (grid.size() < 200) throw std::invalid_argument("is_quasiconcave: grid needs at least 200 points");
  constexpr double kSlack = 1e-10;
  ShapeCheck check{true, 0.0, 0.0};
  double prev_t = 0.0;
  double prev_v = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const double v = rho(t);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error("is_quasiconcave: non-positive value at t=" + std::to_string(t));
    }
    if (i > 0) {
      // nondecreasing
      const double drop = (prev_v - v) / prev_v;
      // rho(t)/t nonincreasing
      const double rise = (v / t - prev_v / prev_t) / (prev_v / prev_t);
      const double worst = std::max(drop, rise);
      if (worst > check.worst_violation) {
        check.worst_violation = worst;
        check.worst_at = t;
      }
    }
    prev_t = t;
    prev_v = v;
  }
  check.ok = check.worst_violation <= kSlack;
  return check;
}

ShapeCheck is_concave(const std::function<double(double)>& rho, std::span<const double> grid,
                      double rel_tol) {
  ShapeCheck check{true, 0.0, 0.0};
  if (grid.size() < 3) return check;
  std::vector<double> v(grid.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = rho(grid[i]);
    scale = std::max(scale, std::abs(v[i]));
  }
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double chord = lerp_at(grid[i - 1], v[i - 1], grid[i + 1], v[i + 1], grid[i]);
    const double local = std::max({std::abs(v[i - 1]), std::abs(v[i]), std::abs(v[i + 1])});
    const double violation = (chord - v[i]) / std::max(local, 1e-300);
    if (violation > check.worst_violation) {
      check.worst_violation = violation;
      check.worst_at = grid[i];
    }
  }
  check.ok = check.worst_violation <= rel_tol;
  return check;
}

QuasiConcaveFn power_log_rho(double theta, double a, double b) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("power_log_rho: theta must lie in (0,1)");
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("power_log_rho: a, b must be finite");
  auto eval = [theta, a, b](double t) {
    if (t <= 0.0) return 0.0;
    constexpr double e = std::numbers::e;
    return std::pow(t, theta) * std::pow(std::log(e + t), a) * std::pow(std::log(e + 1.0 / t), b);
  };
  return {eval, RhoFamily::PowerLog, {theta, a, b}};
}

std::vector<double> default_majorant_grid() { return numeric::decade_grid(1e-8, 1e8, 512); }

PiecewiseLinearConcave concave_majorant(const std::function<double(double)>& rho,
                                        std::span<const double> grid) {
  struct Line {
    double intercept;
    double slope;
    [[nodiscard]] double at(double t) const { return intercept + slope * t; }
  };
  if (grid.empty()) throw std::invalid_argument("concave_majorant: empty grid");
  std::vector<Line> lines;
  lines.reserve(grid.size());
  for (double s : grid) {
    if (!(s > 0.0)) throw std::invalid_argument("concave_majorant: grid must be positive");
    const double v = rho(s);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error("concave_majorant: rho must be positive and finite on the grid");
    }
    lines.push_back({v, v / s});
  }
  // Lower envelope over t > 0: slopes descending, equal slopes keep the lower intercept.
  std::sort(lines.begin(), lines.end(), [](const Line& l, const Line& r) {
    return l.slope != r.slope ? l.slope > r.slope : l.intercept < r.intercept;
  });
  auto cross = [](const Line& l, const Line& r) { return (r.intercept - l.intercept) / (l.slope - r.slope); };
  std::vector<Line> hull;
  for (const Line& line : lines) {
    if (!hull.empty() && hull.back().slope == line.slope) continue;
    // A later line with smaller slope and smaller intercept dominates the earlier ones.
    while (!hull.empty() && hull.back().intercept >= line.intercept) hull.pop_back();
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], line) <= cross(hull[hull.size() - 2], hull.back())) {
      hull.pop_back();
    }
    hull.push_back(line);
  }
  std::vector<double> knots;
  std::vector<double> values;
  std::size_t first = 0;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const double t = cross(hull[k], hull[k + 1]);
    if (!(t > 0.0)) {
      first = k + 1;
      continue;
    }
    if (!knots.empty() && t <= knots.back() * (1.0 + 1e-13)) continue;
    knots.push_back(t);
    values.push_back(std::min(hull[k].at(t), hull[k + 1].at(t)));
  }
  if (knots.empty()) {
    const Line& only = hull[first];
    return {{1.0}, {only.at(1.0)}, only.slope, only.slope};
  }
  return {std::move(knots), std::move(values), hull[first].slope, hull.back().slope};
}

QuasiConcaveFn rho_star(const QuasiConcaveFn& rho) {
  auto eval = [f = rho.evaluator()](double t) { return t * f(1.0 / t); };
  return {eval, RhoFamily::Custom};
}

SurjectivityCheck rho_star_surjective(const QuasiConcaveFn& rho) {
  const QuasiConcaveFn star = rho_star(rho);
  SurjectivityCheck check{false, std::numeric_limits<double>::infinity(), 0.0};
  for (double t : numeric::decade_grid(1e-60, 1e60, 8)) {
    const double v = star(t);
    if (!std::isfinite(v)) continue;
    check.range_lo = std::min(check.range_lo, v);
    check.range_hi = std::max(check.range_hi, v);
  }
  check.onto = check.range_lo <= 1e-10 && check.range_hi >= 1e10;
  return check;
}

PeetreRepresentation peetre_decompose(const PiecewiseLinearConcave& h) {
  PeetreRepresentation rep;
  rep.a = h.value_at_zero();
  rep.b = h.slope_inf();
  const auto knots = h.knots();
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double before = h.segment_slope(k);
    const double after = h.segment_slope(k + 1);
    const double drop = before - after;
    const double tol = 1e-12 * std::max({std::abs(before), std::abs(after), 1e-300});
    if (drop < -tol) throw std::invalid_argument("peetre_decompose: slope increases (not concave)");
    if (drop > tol) rep.atoms.push_back({knots[k], drop});
  }
  if (rep.a < 0.0 && rep.a > -1e-12 * std::abs(h.values().front())) rep.a = 0.0;
  return rep;
}

double phi_expansion(const PeetreRepresentation& rep, double p, double q, double u) {
  if (!std::isfinite(q)) throw std::invalid_argument("phi_expansion needs finite q");
  if (u <= 0.0) return 0.0;
  const double up = std::pow(u, p);
  const double uq = std::pow(u, q);
  double phi = rep.a * uq + rep.b * up;
  for (const auto& atom : rep.atoms) phi += atom.mass * std::min(up, atom.t * uq);
  return phi;
}

}  // namespace orlint
