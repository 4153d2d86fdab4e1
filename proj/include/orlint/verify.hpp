#pragma once

// Scenario engine: numerically checks the modular, K-functional and norm
// inequalities against certified operators on seeded random inputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlint/measure.hpp"
#include "orlint/operators.hpp"
#include "orlint/orlicz.hpp"
#include "orlint/spec_io.hpp"

namespace orlint {

enum class Theorem {
  Prop22,          // K_{p,q}(t, Tx/M) <= K_{p,q}(t, x)
  SparrLemma,      // K-majorization implies K*-majorization up to gamma
  Thm31a,          // I_phi(Tx / (2^(1-1/p) M)) <= I_phi(x), q = inf
  Thm31bNorm,      // norms, C = 2^(1-1/p), q = inf
  Thm46a,          // I_phi(Tx / M) <= gamma I_phi(x), phi(u) = u^q h(u^(p-q))
  Thm46bNorm,      // norms, C = (2 gamma)^(1/p)
  RemarkConcaveH,  // norms, C = gamma^(1/p), h-form phi
  Thm51Linear,     // norms, linear T, C = min{(2 gamma_{p,q})^(1/p), (2 gamma_{q',p'})^(1/q')}
};
std::string to_string(Theorem theorem);
Theorem theorem_from_string(const std::string& tag);

enum class ConstantSource { Subadditive, LpLinf, ConcaveH, Linear };
std::string to_string(ConstantSource source);
ConstantSource constant_source_from_string(const std::string& tag);

struct InputSpec {
  int count = 100;
  int atoms = 8;
  /// mixed, uniform, lognormal, spikes or constant.
  std::string distribution = "mixed";
  std::uint64_t seed = 0;
  /// Weight of every atom.
  double weight = 1.0;
};

struct TGrid {
  double start = 1e-6;
  double stop = 1e6;
  int points = 64;
  [[nodiscard]] std::vector<double> values() const;
};

struct Tolerances {
  /// Violation when lhs > rhs (1 + relative); the default depends on the theorem.
  double relative = 1e-9;
  /// Used instead when rhs == 0.
  double absolute = 1e-12;
  /// Slack for the K-majorization hypothesis of the Sparr lemma.
  double hypothesis = 1e-12;
};

struct Scenario {
  Theorem theorem = Theorem::Thm46a;
  ExponentCouple couple{1.0, 2.0};
  /// Normalized specs; absent when the theorem does not use them.
  std::optional<io::Json> phi;
  std::optional<io::Json> op;
  InputSpec inputs;
  TGrid t_grid;
  Tolerances tolerances;
  std::optional<ConstantSource> constant;
  /// Multiplies every certified bound (values below 1 plant faults).
  double bound_scale = 1.0;
  /// Thm46bNorm only: also check I_phi(Tx/M) <= I_psi(Tx/M) <= gamma I_psi(x) <= 2 gamma I_phi(x).
  bool diagnostic_chain = false;

  static Scenario from_json(const io::Json& json);
  [[nodiscard]] io::Json to_json() const;
  /// Twice the t-grid points and inputs.
  [[nodiscard]] Scenario refined() const;
};

struct Violation {
  double t = 0.0;  // NaN for modular and norm checks
  int input_index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  /// Check that failed, e.g. "luxemburg" or a diagnostic chain link.
  std::string check;
};

enum class Status { Pass, Fail, Rejected };
std::string to_string(Status status);

struct VerificationReport {
  io::Json scenario;
  Status status = Status::Pass;
  std::string reason;  // set when rejected
  int trials = 0;
  /// Sparr lemma: inputs whose hypothesis held on the grid.
  int hypothesis_met = 0;
  int violation_count = 0;
  /// Largest (lhs - rhs) / rhs seen over all checks, violating or not.
  double worst_margin = -kInf;
  /// Up to 1000 violations, ordered by input index.
  std::vector<Violation> violations;
  /// Values of the violating input with the smallest index (for the Sparr
  /// lemma also the paired y).
  std::optional<io::Json> witness;
  /// Facts about the hypotheses that do not change the status.
  std::vector<std::string> notes;
  double wall_ms = 0.0;

  [[nodiscard]] bool passed() const { return status == Status::Pass; }
  /// The report; `include_timing` false drops wall_ms for byte-stable output.
  [[nodiscard]] io::Json to_json(bool include_timing = true) const;
};

/// Seeded inputs for a scenario; input i depends only on (seed, i).
std::vector<SampleFunction> generate_inputs(const InputSpec& spec, const SpacePtr& space);

struct RunOptions {
  int jobs = 1;
};

VerificationReport verify_k_contraction(const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                        const ExponentCouple& couple, const std::vector<double>& t_grid,
                                        const Tolerances& tol, const RunOptions& run = {});

VerificationReport verify_sparr_implication(const std::vector<SampleFunction>& xs,
                                            const std::vector<SampleFunction>& ys, const ExponentCouple& couple,
                                            const std::vector<double>& t_grid, const Tolerances& tol,
                                            const RunOptions& run = {});

/// Rejected unless psi(u) = phi(u^(1/p)) passes check_convexity.
VerificationReport verify_modular_lp_linf(const OrliczFunction& phi, double p, const CertifiedOperator& op,
                                          const std::vector<SampleFunction>& inputs, const Tolerances& tol,
                                          const RunOptions& run = {});

VerificationReport verify_modular_lp_lq(const OrliczFunction& phi, const ExponentCouple& couple,
                                        const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                        const Tolerances& tol, const RunOptions& run = {});

/// The interpolation constant for a source, or throws SpecError when the
/// source does not apply to the couple or operator.
double interpolation_constant(ConstantSource source, const ExponentCouple& couple, const CertifiedOperator& op);

VerificationReport verify_norm_interpolation(const OrliczFunction& phi, const ExponentCouple& couple,
                                             const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                             ConstantSource source, const Tolerances& tol,
                                             const RunOptions& run = {});

/// Links of I_phi(Tx/M) <= I_psi(Tx/M) <= gamma I_psi(x) <= 2 gamma I_phi(x),
/// with psi(u) = u^q h~(u^(p-q)) and h~ the concave majorant of the h of phi.
VerificationReport verify_diagnostic_chain(const OrliczFunction& phi, const ExponentCouple& couple,
                                           const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                           const Tolerances& tol, const RunOptions& run = {});

VerificationReport run_scenario(const Scenario& scenario, const RunOptions& run = {});

}  // namespace orlint
