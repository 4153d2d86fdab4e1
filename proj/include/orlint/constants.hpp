#pragma once

// Sparr constants and the interpolation constants built from them.

#include <string>

namespace orlint {

enum class GammaMethod { ClosedForm, RootFinding, BisectionOracle };

std::string to_string(GammaMethod method);

struct SparrConstant {
  double p = 1.0;
  double q = 1.0;
  double value = 1.0;
  GammaMethod method = GammaMethod::ClosedForm;
};

/// gamma_{p,q} for p, q in [1, 64] from the stationarity characterization:
/// over roots x in (0,1) of x^p + ((p/q) x^(p-1))^(q/(q-1)) = 1, the minimum
/// of x + ((p/q) x^(p-1))^(1/(q-1)). Roots are bracketed on a 1e5-point scan
/// and bisected to 1e-13. Symmetric in (p, q).
SparrConstant sparr_gamma(double p, double q);

/// inf over x + y = gamma, x, y >= 0 of x^p + y^q.
double sparr_inner_minimum(double gamma, double p, double q);

/// gamma_{p,q} straight from its definition: the gamma in [1, 2] where
/// sparr_inner_minimum crosses 1, found by bisection. p, q in [1, 16].
SparrConstant sparr_gamma_oracle(double p, double q);

/// 2^(1-1/p) <= gamma_{p,q} <= 2^(1-1/q) for p <= q, within 1e-9.
bool gamma_bounds_check(double p, double q);

/// (2 gamma_{p,q})^(1/p), checked against 2^((2-1/q)/p) < 4.
double interp_constant_subadditive(double p, double q);

/// gamma_{p,q}^(1/p), checked against 2^(1/(q' p)) < 2.
double interp_constant_concave_h(double p, double q);

/// min{(2 gamma_{p,q})^(1/p), (2 gamma_{q',p'})^(1/q')} for linear operators,
/// 1 < p < q < inf. Checked against 2^(1/(p q') + min{1/p, 1/q'}) < 4 and,
/// when p < q <= 2 or 2 <= p < q, against 2.
double interp_constant_linear(double p, double q);

/// 2^(1-1/p): the sharp upper constant in the (L^p, L^inf) K-functional bounds.
double bergh_constant(double p);

/// p / (p - 1); throws for p <= 1.
double conjugate_exponent(double p);

}  // namespace orlint
