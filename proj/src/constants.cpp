#include "orlint/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "orlint/numeric.hpp"

namespace orlint {

std::string to_string(GammaMethod method) {
  switch (method) {
    case GammaMethod::ClosedForm: return "closed_form";
    case GammaMethod::RootFinding: return "root_finding";
    case GammaMethod::BisectionOracle: return "bisection_oracle";
  }
  return "closed_form";
}

namespace {

void require_range(double p, double q, double hi, const char* who) {
  if (!(p >= 1.0 && p <= hi && q >= 1.0 && q <= hi)) {
    throw std::invalid_argument(std::string(who) + ": exponents must lie in [1, " + std::to_string(hi) + "]");
  }
}

void require_strict_couple(double p, double q, const char* who) {
  if (!(p >= 1.0 && q > p && std::isfinite(q))) {
    throw std::invalid_argument(std::string(who) + ": needs 1 <= p < q < inf");
  }
}

void check_claim(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("interpolation constant bound violated: ") + what);
}

constexpr double kClaimSlack = 1e-12;

}  // namespace

SparrConstant sparr_gamma(double p, double q) {
  require_range(p, q, 64.0, "sparr_gamma");
  if (p == 1.0 && q == 1.0) return {p, q, 1.0, GammaMethod::ClosedForm};
  if (q == 1.0) {
    SparrConstant swapped = sparr_gamma(q, p);
    return {p, q, swapped.value, swapped.method};
  }
  const double ratio = p / q;
  auto y_of = [&](double x) { return std::pow(ratio * std::pow(x, p - 1.0), 1.0 / (q - 1.0)); };
  auto constraint = [&](double x) {
    return std::pow(x, p) + std::pow(ratio * std::pow(x, p - 1.0), q / (q - 1.0)) - 1.0;
  };
  constexpr int kScan = 100000;
  double best = std::numeric_limits<double>::infinity();
  double prev_x = 0.0;
  double prev_f = constraint(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double x = static_cast<double>(i) / kScan;
    const double f = constraint(x);
    if (f == 0.0) {
      best = std::min(best, x + y_of(x));
    } else if ((prev_f < 0.0) != (f < 0.0) && prev_f != 0.0) {
      const double root = numeric::bisect(constraint, prev_x, x, 1e-13);
      best = std::min(best, root + y_of(root));
    }
    prev_x = x;
    prev_f = f;
  }
  if (!std::isfinite(best)) throw std::logic_error("sparr_gamma: no root of the constraint found");
  return {p, q, best, GammaMethod::RootFinding};
}

double sparr_inner_minimum(double gamma, double p, double q) {
  if (gamma <= 0.0) return 0.0;
  auto objective = [&](double y) { return std::pow(gamma - y, p) + std::pow(y, q); };
  return numeric::ternary_min(objective, 0.0, gamma, 200).second;
}

SparrConstant sparr_gamma_oracle(double p, double q) {
  require_range(p, q, 16.0, "sparr_gamma_oracle");
  // m(gamma) is continuous and strictly increasing with m(1) <= 1 <= m(2).
  double lo = 1.0;
  double hi = 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (sparr_inner_minimum(mid, p, q) < 1.0 ? lo : hi) = mid;
  }
  return {p, q, 0.5 * (lo + hi), GammaMethod::BisectionOracle};
}

bool gamma_bounds_check(double p, double q) {
  if (p > q) throw std::invalid_argument("gamma_bounds_check needs p <= q");
  const double g = sparr_gamma(p, q).value;
  return std::pow(2.0, 1.0 - 1.0 / p) - 1e-9 <= g && g <= std::pow(2.0, 1.0 - 1.0 / q) + 1e-9;
}

double interp_constant_subadditive(double p, double q) {
  require_strict_couple(p, q, "interp_constant_subadditive");
  const double c = std::pow(2.0 * sparr_gamma(p, q).value, 1.0 / p);
  const double envelope = std::pow(2.0, (2.0 - 1.0 / q) / p);
  check_claim(c <= envelope * (1.0 + kClaimSlack) && envelope < 4.0, "(2 gamma)^(1/p) <= 2^((2-1/q)/p) < 4");
  return c;
}

double interp_constant_concave_h(double p, double q) {
  require_strict_couple(p, q, "interp_constant_concave_h");
  const double c = std::pow(sparr_gamma(p, q).value, 1.0 / p);
  const double inv_q_conj = 1.0 - 1.0 / q;
  const double envelope = std::pow(2.0, inv_q_conj / p);
  check_claim(c <= envelope * (1.0 + kClaimSlack) && envelope < 2.0, "gamma^(1/p) <= 2^(1/(q' p)) < 2");
  return c;
}

double interp_constant_linear(double p, double q) {
  if (!(p > 1.0)) throw std::invalid_argument("interp_constant_linear: needs 1 < p < q < inf");
  require_strict_couple(p, q, "interp_constant_linear");
  const double p_conj = conjugate_exponent(p);
  const double q_conj = conjugate_exponent(q);
  const double direct = std::pow(2.0 * sparr_gamma(p, q).value, 1.0 / p);
  const double dual = std::pow(2.0 * sparr_gamma(q_conj, p_conj).value, 1.0 / q_conj);
  const double c = std::min(direct, dual);
  const double envelope = std::pow(2.0, 1.0 / (p * q_conj) + std::min(1.0 / p, 1.0 / q_conj));
  check_claim(c <= envelope * (1.0 + kClaimSlack) && envelope < 4.0, "C <= 2^(1/(p q') + min{1/p, 1/q'}) < 4");
  if (q <= 2.0 || p >= 2.0) check_claim(c < 2.0, "C < 2 when 1 < p < q <= 2 or 2 <= p < q");
  return c;
}

double bergh_constant(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("bergh_constant needs 1 <= p < inf");
  return std::pow(2.0, 1.0 - 1.0 / p);
}

double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("conjugate exponent needs p > 1");
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

}  // namespace orlint
