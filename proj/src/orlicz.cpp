#include "orlint/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "orlint/error.hpp"
#include "orlint/numeric.hpp"

namespace orlint {

ExponentCouple::ExponentCouple(double p_, double q_) : p(p_), q(q_) {
  if (!(p >= 1.0) || !std::isfinite(p) || !(q > p)) {
    throw std::invalid_argument("exponent couple needs 1 <= p < q <= inf");
  }
}

struct OrliczFunction::Impl {
  Kind kind = Kind::Power;
  double power_p = 1.0;
  std::optional<ExponentCouple> couple;
  std::optional<QuasiConcaveFn> rho;
  std::optional<PiecewiseLinearConcave> h;
  // Tabulated: linear interpolation through (0,0) and (grid, values).
  std::vector<double> grid;
  std::vector<double> values;
  // Generator: log phi as a monotone cubic in log v.
  std::vector<double> log_v;
  std::vector<double> log_u;
  std::vector<double> slope;
  double low_exponent = 1.0;
  double u_max = kInf;
  bool truncated = false;

  [[nodiscard]] double eval(double u) const;
  [[nodiscard]] double eval_generator(double v) const;
  [[nodiscard]] double inverse(double u) const;
};

namespace {

// Fritsch-Carlson derivatives for a monotone cubic Hermite interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  d.front() = delta.front();
  d.back() = delta.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  return d;
}

void validate_generator_convexity(const OrliczFunction& phi, double v_lo, double v_hi) {
  auto f = [&phi](double u) { return phi(u); };
  const int k0 = static_cast<int>(std::floor(std::log10(v_lo)));
  const int k1 = static_cast<int>(std::ceil(std::log10(v_hi)));
  for (int k = k0; k <= k1; ++k) {
    const double top = std::min(std::pow(10.0, k), v_hi);
    const auto grid = numeric::linear_grid(0.0, top, 200);
    const auto check = check_convexity(f, grid);
    if (!check.ok) {
      throw std::invalid_argument("generator produced a non-convex phi near u=" +
                                  std::to_string(check.worst_at));
    }
  }
}

}  // namespace

double OrliczFunction::Impl::eval(double u) const {
  if (u <= 0.0) return 0.0;
  switch (kind) {
    case Kind::Power:
      return std::pow(u, power_p);
    case Kind::ConcaveH: {
      const double up = std::pow(u, couple->p);
      const double uq = std::pow(u, couple->q);
      // u^q h(u^(p-q)) written so that u^q * u^(p-q) = u^p is exact in the linear part.
      const double s = up / uq;
      return uq * (*h)(s);
    }
    case Kind::Tabulated: {
      if (u <= grid.front()) return values.front() * (u / grid.front());
      const auto it = std::upper_bound(grid.begin(), grid.end(), u);
      if (it == grid.end()) return values.back();
      const auto k = static_cast<std::size_t>(it - grid.begin());
      const double w = (u - grid[k - 1]) / (grid[k] - grid[k - 1]);
      return values[k - 1] + w * (values[k] - values[k - 1]);
    }
    case Kind::Generator:
      return eval_generator(u);
  }
  return 0.0;
}

double OrliczFunction::Impl::eval_generator(double v) const {
  const double L = std::log(v);
  if (L <= log_v.front()) return std::exp(log_u.front() + low_exponent * (L - log_v.front()));
  if (L >= log_v.back()) return std::exp(log_u.back());
  const auto it = std::upper_bound(log_v.begin(), log_v.end(), L);
  const auto k = static_cast<std::size_t>(it - log_v.begin()) - 1;
  const double h = log_v[k + 1] - log_v[k];
  const double t = (L - log_v[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  const double y = h00 * log_u[k] + h10 * h * slope[k] + h01 * log_u[k + 1] + h11 * h * slope[k + 1];
  return std::exp(y);
}

double OrliczFunction::Impl::inverse(double u) const {
  const double p = couple->p;
  const double exponent = couple->q_infinite() ? -1.0 / p : 1.0 / couple->q - 1.0 / p;
  return std::pow(u, 1.0 / p) * (*rho)(std::pow(u, exponent));
}

OrliczFunction OrliczFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power Orlicz function needs p >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Power;
  impl->power_p = p;
  return OrliczFunction(std::move(impl));
}

OrliczFunction OrliczFunction::tabulated(std::vector<double> grid, std::vector<double> values) {
  if (grid.empty() || grid.size() != values.size()) {
    throw std::invalid_argument("tabulated Orlicz function needs matching nonempty grid and values");
  }
  if (grid.front() == 0.0) {
    if (values.front() != 0.0) throw std::invalid_argument("tabulated Orlicz function needs phi(0) = 0");
    grid.erase(grid.begin());
    values.erase(values.begin());
    if (grid.empty()) throw std::invalid_argument("tabulated Orlicz function needs a positive grid point");
  }
  double prev_u = 0.0;
  double prev_phi = 0.0;
  double prev_slope = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > prev_u) || !std::isfinite(grid[k]) || !std::isfinite(values[k])) {
      throw std::invalid_argument("tabulated Orlicz function: grid must strictly increase");
    }
    const double s = (values[k] - prev_phi) / (grid[k] - prev_u);
    if (s < 0.0) throw std::invalid_argument("tabulated Orlicz function must be nondecreasing");
    if (s < prev_slope * (1.0 - 1e-12)) throw std::invalid_argument("tabulated Orlicz function must be convex");
    prev_u = grid[k];
    prev_phi = values[k];
    prev_slope = s;
  }
  if (values.back() <= 0.0) throw std::invalid_argument("tabulated Orlicz function is identically zero");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Tabulated;
  impl->u_max = grid.back();
  impl->grid = std::move(grid);
  impl->values = std::move(values);
  return OrliczFunction(std::move(impl));
}

double OrliczFunction::operator()(double u) const {
  if (u > impl_->u_max) {
    throw DomainOverflow("Orlicz function evaluated at " + std::to_string(u) + " beyond u_max " +
                         std::to_string(impl_->u_max));
  }
  return impl_->eval(u);
}

double OrliczFunction::eval_or_inf(double u) const {
  if (u > impl_->u_max) return kInf;
  return impl_->eval(u);
}

double OrliczFunction::u_max() const { return impl_->u_max; }
OrliczFunction::Kind OrliczFunction::kind() const { return impl_->kind; }
std::optional<ExponentCouple> OrliczFunction::couple() const { return impl_->couple; }
bool OrliczFunction::truncated() const { return impl_->truncated; }

const PiecewiseLinearConcave* OrliczFunction::concave_h() const {
  return impl_->h ? &*impl_->h : nullptr;
}

double OrliczFunction::generator_inverse(double u) const {
  if (impl_->kind != Kind::Generator) throw std::logic_error("generator_inverse on a non-generator function");
  return impl_->inverse(u);
}

OrliczFunction build_from_generator(const ExponentCouple& couple, const QuasiConcaveFn& rho) {
  const auto check_grid = default_check_grid();
  const auto qc = is_quasiconcave(rho.evaluator(), check_grid);
  if (!qc.ok) {
    throw std::invalid_argument("generator rho is not quasi-concave (violation " +
                                std::to_string(qc.worst_violation) + " at t=" + std::to_string(qc.worst_at) + ")");
  }
  const auto cc = is_concave(rho.evaluator(), check_grid);
  if (!cc.ok) {
    throw std::invalid_argument("generator rho is not concave (violation " +
                                std::to_string(cc.worst_violation) + " at t=" + std::to_string(cc.worst_at) + ")");
  }

  auto impl = std::make_shared<OrliczFunction::Impl>();
  impl->kind = OrliczFunction::Kind::Generator;
  impl->couple = couple;
  impl->rho = rho;

  constexpr int kPerDecade = 4096;
  constexpr int kDecades = 24;
  constexpr double kLogLo = -12.0;
  const int n = kPerDecade * kDecades + 1;
  impl->log_v.reserve(static_cast<std::size_t>(n));
  impl->log_u.reserve(static_cast<std::size_t>(n));
  double last_v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double log10_u = kLogLo + static_cast<double>(i) / kPerDecade;
    const double u = std::pow(10.0, log10_u);
    const double v = impl->inverse(u);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("generator inverse is not positive and finite at u=" + std::to_string(u));
    }
    if (v > last_v * (1.0 + 1e-13)) {
      if (impl->truncated) {
        throw std::invalid_argument("generator inverse is not strictly increasing on the grid");
      }
      impl->log_v.push_back(std::log(v));
      impl->log_u.push_back(log10_u * std::numbers::ln10);
      last_v = v;
    } else if (v < last_v * (1.0 - 1e-12)) {
      throw std::invalid_argument("generator inverse decreases at u=" + std::to_string(u));
    } else if (i > 0) {
      impl->truncated = true;
    }
  }
  // A stall followed by growth would have thrown; a stall that reaches the end
  // of the table is the flat tail where phi becomes infinite.
  if (impl->log_v.size() < 2) throw std::invalid_argument("generator inverse is constant");
  impl->slope = pchip_slopes(impl->log_v, impl->log_u);
  impl->low_exponent = std::max(1.0, impl->slope.front());
  impl->u_max = std::exp(impl->log_v.back());

  OrliczFunction phi(std::move(impl));
  validate_generator_convexity(phi, std::exp(phi.impl_->log_v.front()), phi.u_max());
  return phi;
}

OrliczFunction build_from_h(const ExponentCouple& couple, const PiecewiseLinearConcave& h) {
  if (couple.q_infinite()) throw std::invalid_argument("build_from_h needs finite q");
  if (!(h.value_at_zero() > 0.0) && !(h.slope0() > 0.0)) {
    throw std::invalid_argument("build_from_h needs h positive on (0, inf)");
  }
  auto impl = std::make_shared<OrliczFunction::Impl>();
  impl->kind = OrliczFunction::Kind::ConcaveH;
  impl->couple = couple;
  impl->h = h;
  return OrliczFunction(std::move(impl));
}

std::function<double(double)> lemma_h(const OrliczFunction& phi, const ExponentCouple& couple) {
  if (couple.q_infinite()) throw std::invalid_argument("lemma_h needs finite q");
  return [phi, couple](double s) {
    const double u = std::pow(s, 1.0 / (couple.p - couple.q));
    return phi.eval_or_inf(u) * std::pow(u, -couple.q);
  };
}

double modular(const OrliczFunction& phi, const SampleFunction& x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += phi(std::abs(x[i])) * x.weight(i);
  return acc;
}

double modular(const OrliczFunction& phi, const StepFunction& x) {
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t k = 0; k < x.steps(); ++k) {
    acc += phi(x.levels()[k]) * (x.breakpoints()[k] - left);
    left = x.breakpoints()[k];
  }
  return acc;
}

double modular_or_inf(const OrliczFunction& phi, const SampleFunction& x, double scale) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = phi.eval_or_inf(std::abs(x[i]) * scale);
    if (v == kInf) return kInf;
    acc += v * x.weight(i);
  }
  return acc;
}

double luxemburg_norm(const OrliczFunction& phi, const SampleFunction& x) {
  const double sup = sup_norm(x);
  if (sup == 0.0) return 0.0;
  auto over = [&](double lambda) { return modular_or_inf(phi, x, 1.0 / lambda) > 1.0; };
  double hi = sup;
  double lo = sup;
  int guard = 0;
  while (over(hi)) {
    hi *= 2.0;
    if (++guard > 4000 || !std::isfinite(hi)) throw ConvergenceFailure("luxemburg_norm: no upper bracket");
  }
  guard = 0;
  while (!over(lo)) {
    lo *= 0.5;
    if (++guard > 4000 || lo == 0.0) throw ConvergenceFailure("luxemburg_norm: no lower bracket");
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi) return hi;
    (over(mid) ? lo : hi) = mid;
  }
  throw ConvergenceFailure("luxemburg_norm: bisection did not converge");
}

double amemiya_norm(const OrliczFunction& phi, const SampleFunction& x) {
  if (sup_norm(x) == 0.0) return 0.0;
  const double lux = luxemburg_norm(phi, x);
  auto objective = [&](double log_k) {
    const double k = std::exp(log_k);
    const double m = modular_or_inf(phi, x, k);
    return m == kInf ? kInf : (1.0 + m) / k;
  };
  const double center = -std::log(lux);
  constexpr int kScan = 257;
  constexpr double kHalfWidth = 40.0;
  const double step = 2.0 * kHalfWidth / (kScan - 1);
  int best = 0;
  double best_val = kInf;
  for (int j = 0; j < kScan; ++j) {
    const double v = objective(center - kHalfWidth + step * j);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  if (best_val == kInf) throw ConvergenceFailure("amemiya_norm: objective infinite on the search window");
  const double lo = center - kHalfWidth + step * std::max(0, best - 1);
  const double hi = center - kHalfWidth + step * std::min(kScan - 1, best + 1);
  const auto [arg, val] = numeric::golden_section(objective, lo, hi, 1e-13);
  (void)arg;
  return std::min(val, best_val);
}

ConvexityCheck check_convexity(const std::function<double(double)>& f, std::span<const double> grid) {
  if (grid.size() < 100) throw std::invalid_argument("check_convexity: grid needs at least 100 points");
  std::vector<double> v(grid.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = f(grid[i]);
    scale = std::max(scale, std::abs(v[i]));
  }
  ConvexityCheck check{true, 0.0, 0.0};
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d2 = v[i + 1] - 2.0 * v[i] + v[i - 1];
    if (d2 < check.worst_second_difference) {
      check.worst_second_difference = d2;
      check.worst_at = grid[i];
    }
  }
  check.ok = check.worst_second_difference >= -1e-8 * scale;
  return check;
}

double check_delta2(const OrliczFunction& phi, std::span<const double> grid) {
  double sup = 0.0;
  for (double u : grid) {
    if (!(u > 0.0)) throw std::invalid_argument("check_delta2: grid must be positive");
    const double base = phi(u);
    if (base == 0.0) throw std::domain_error("check_delta2: phi vanishes at u=" + std::to_string(u));
    sup = std::max(sup, phi(2.0 * u) / base);
  }
  return sup;
}

}  // namespace orlint
