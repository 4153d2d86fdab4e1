#pragma once

// Test operators carrying certified upper bounds on their L^r norms.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "orlint/measure.hpp"
#include "orlint/orlicz.hpp"

namespace orlint {

enum class OperatorKind { Linear, Sublinear, Subadditive };

std::string to_string(OperatorKind kind);

/// An operator on functions over one measure space, with a certified upper
/// bound on ||T||_{L^r -> L^r} for every r in [1, inf].
class CertifiedOperator {
 public:
  using Apply = std::function<SampleFunction(const SampleFunction&)>;
  using Bound = std::function<double(double)>;

  CertifiedOperator(std::string name, OperatorKind kind, SpacePtr space, Apply apply, Bound bound,
                    std::string certificate);

  [[nodiscard]] SampleFunction operator()(const SampleFunction& x) const;

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] OperatorKind kind() const { return kind_; }
  [[nodiscard]] const SpacePtr& space() const { return space_; }
  [[nodiscard]] const std::string& certificate() const { return certificate_; }

  /// Certified bound on the L^r operator norm.
  [[nodiscard]] double bound(double r) const { return bound_(r); }
  /// max{bound(p), bound(q)}.
  [[nodiscard]] double admissible_bound(const ExponentCouple& couple) const;

  /// Same operator with every certified bound multiplied by factor; used to
  /// plant faults in negative controls.
  [[nodiscard]] CertifiedOperator with_scaled_bounds(double factor) const;

 private:
  std::string name_;
  OperatorKind kind_;
  SpacePtr space_;
  Apply apply_;
  Bound bound_;
  std::string certificate_;
};

using Matrix = std::vector<std::vector<double>>;

/// Linear operator x -> A x on a uniform-weight space. Requires every row and
/// column l^1 norm <= 1; the bound interpolates col^(1/r) row^(1-1/r).
CertifiedOperator contractive_matrix(const SpacePtr& space, const Matrix& a, std::string name = "matrix");

CertifiedOperator identity_operator(const SpacePtr& space);
/// All entries 1/n.
CertifiedOperator averaging_operator(const SpacePtr& space);
/// scale * cyclic shift (Tx)_i = scale * x_{i+1}.
CertifiedOperator shift_operator(const SpacePtr& space, double scale = 1.0);

/// (Tx)_i = m_i x_i with |m_i| <= 1; bound max|m_i| for every r.
CertifiedOperator multiplier(const SpacePtr& space, std::vector<double> m, std::string name = "multiplier");

/// (Tx)_i = max_j |(T_j x)_i|, with bound (sum_j bound_j(r)^r)^(1/r).
CertifiedOperator max_of(const std::vector<CertifiedOperator>& ops, std::string name = "max_of");

/// Uncentered discrete maximal operator over all contiguous windows of a
/// uniform-weight space. See the implementation for the certificate.
CertifiedOperator discrete_maximal(const SpacePtr& space);

/// Lower-bound estimate of ||T||_{L^r -> L^r}.
double estimate_norm(const CertifiedOperator& op, double r, int trials, std::uint64_t seed);

struct SubadditivityProbe {
  bool ok = true;
  double worst_excess = 0.0;
  int probes = 0;
};

/// Checks |T(x+y)| <= |Tx| + |Ty| atomwise on seeded random pairs.
SubadditivityProbe probe_subadditivity(const CertifiedOperator& op, int pairs, std::uint64_t seed,
                                       double slack = 1e-10);

/// Checks |T(lambda x)| = |lambda| |Tx| atomwise on seeded random inputs.
SubadditivityProbe probe_homogeneity(const CertifiedOperator& op, int probes, std::uint64_t seed,
                                     double slack = 1e-12);

}  // namespace orlint
