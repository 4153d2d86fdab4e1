#pragma once

// Finite discrete measure spaces, functions on them, decreasing
// rearrangements and the Hardy-Littlewood-Polya majorization predicate.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace orlint {

/// Atoms 0..n-1 carrying strictly positive weights.
class DiscreteMeasureSpace {
 public:
  explicit DiscreteMeasureSpace(std::vector<double> weights);

  static std::shared_ptr<const DiscreteMeasureSpace> make(std::vector<double> weights);
  static std::shared_ptr<const DiscreteMeasureSpace> uniform(std::size_t atoms, double weight = 1.0);

  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
  [[nodiscard]] double total_measure() const { return total_; }
  [[nodiscard]] bool is_uniform() const;

  friend bool operator==(const DiscreteMeasureSpace& a, const DiscreteMeasureSpace& b) {
    return a.weights_ == b.weights_;
  }

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

using SpacePtr = std::shared_ptr<const DiscreteMeasureSpace>;

/// Real values on the atoms of a DiscreteMeasureSpace.
class SampleFunction {
 public:
  SampleFunction(SpacePtr space, std::vector<double> values);

  [[nodiscard]] const SpacePtr& space() const { return space_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double weight(std::size_t i) const { return space_->weight(i); }

  [[nodiscard]] SampleFunction abs() const;
  [[nodiscard]] SampleFunction scaled(double factor) const;
  [[nodiscard]] SampleFunction with_values(std::vector<double> values) const;
  [[nodiscard]] bool same_space(const SampleFunction& other) const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Right-continuous non-increasing step function on [0, total measure):
/// level k holds on [breakpoints[k-1], breakpoints[k]) with breakpoints[-1] = 0.
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> levels);

  [[nodiscard]] std::span<const double> breakpoints() const { return breakpoints_; }
  [[nodiscard]] std::span<const double> levels() const { return levels_; }
  [[nodiscard]] std::size_t steps() const { return levels_.size(); }
  [[nodiscard]] double total_measure() const {
    return breakpoints_.empty() ? 0.0 : breakpoints_.back();
  }

  /// Value x*(s); zero beyond the total measure.
  [[nodiscard]] double operator()(double s) const;

  /// Integral of level^p over [0, t].
  [[nodiscard]] double cumulative_power(double t, double p) const;

  /// Sample with one atom per step (weight = step width, value = level).
  [[nodiscard]] SampleFunction to_sample() const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

/// Decreasing rearrangement of |x|; equal levels are merged into one step.
StepFunction rearrangement(const SampleFunction& x);

/// Weighted sum of |x_i|^p.
double lp_integral(const SampleFunction& x, double p);
double lp_integral(const StepFunction& x, double p);

/// (lp_integral)^(1/p), or the sup norm for p = infinity.
double lp_norm(const SampleFunction& x, double p);

double sup_norm(const SampleFunction& x);

struct MajorizationResult {
  bool holds = false;
  /// Smallest value of (Y(t) - X(t)) over breakpoints, where X, Y are the
  /// cumulative integrals of the p-th powers of the rearrangements.
  double worst_margin = 0.0;
  /// Location of the worst margin.
  double worst_t = 0.0;
};

/// Checks int_0^t x*(s)^p ds <= int_0^t y*(s)^p ds for all t. Both cumulative
/// functions are piecewise linear, so checking the union of breakpoints is exact.
MajorizationResult hardy_majorizes(const SampleFunction& x, const SampleFunction& y, double p,
                                   double slack = 0.0);

/// Reads the `weight,value` CSV format.
SampleFunction read_function_csv(std::istream& in);
SampleFunction read_function_csv_file(const std::string& path);
void write_function_csv(std::ostream& out, const SampleFunction& x);

}  // namespace orlint
