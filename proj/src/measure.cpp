#include "orlint/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "orlint/error.hpp"

namespace orlint {

DiscreteMeasureSpace::DiscreteMeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("measure space weights must be finite and strictly positive");
    }
    total_ += w;
  }
}

std::shared_ptr<const DiscreteMeasureSpace> DiscreteMeasureSpace::make(std::vector<double> weights) {
  return std::make_shared<const DiscreteMeasureSpace>(std::move(weights));
}

std::shared_ptr<const DiscreteMeasureSpace> DiscreteMeasureSpace::uniform(std::size_t atoms, double weight) {
  return make(std::vector<double>(atoms, weight));
}

bool DiscreteMeasureSpace::is_uniform() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [&](double w) { return w == weights_.front(); });
}

SampleFunction::SampleFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw std::invalid_argument("sample function needs a measure space");
  if (values_.size() != space_->size()) {
    throw std::invalid_argument("sample function length does not match atom count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample function values must be finite");
  }
}

SampleFunction SampleFunction::abs() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return std::abs(v); });
  return {space_, std::move(out)};
}

SampleFunction SampleFunction::scaled(double factor) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [&](double v) { return v * factor; });
  return {space_, std::move(out)};
}

SampleFunction SampleFunction::with_values(std::vector<double> values) const {
  return {space_, std::move(values)};
}

bool SampleFunction::same_space(const SampleFunction& other) const {
  return space_ == other.space_ || *space_ == *other.space_;
}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> levels)
    : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
  if (breakpoints_.size() != levels_.size()) {
    throw std::invalid_argument("step function needs one breakpoint per level");
  }
  double prev_b = 0.0;
  double prev_l = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (!(breakpoints_[k] > prev_b)) throw std::invalid_argument("breakpoints must strictly increase");
    if (levels_[k] < 0.0 || levels_[k] > prev_l) {
      throw std::invalid_argument("levels must be nonnegative and non-increasing");
    }
    prev_b = breakpoints_[k];
    prev_l = levels_[k];
  }
}

double StepFunction::operator()(double s) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  if (it == breakpoints_.end()) return 0.0;
  return levels_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double StepFunction::cumulative_power(double t, double p) const {
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t k = 0; k < levels_.size() && left < t; ++k) {
    const double right = std::min(breakpoints_[k], t);
    acc += std::pow(levels_[k], p) * (right - left);
    left = breakpoints_[k];
  }
  return acc;
}

SampleFunction StepFunction::to_sample() const {
  std::vector<double> widths(levels_.size());
  double left = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    widths[k] = breakpoints_[k] - left;
    left = breakpoints_[k];
  }
  return {DiscreteMeasureSpace::make(std::move(widths)), levels_};
}

StepFunction rearrangement(const SampleFunction& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(x[a]) > std::abs(x[b]);
  });
  std::vector<double> breakpoints;
  std::vector<double> levels;
  double cumulative = 0.0;
  for (std::size_t idx : order) {
    const double level = std::abs(x[idx]);
    cumulative += x.weight(idx);
    if (!levels.empty() && levels.back() == level) {
      breakpoints.back() = cumulative;
    } else {
      levels.push_back(level);
      breakpoints.push_back(cumulative);
    }
  }
  return {std::move(breakpoints), std::move(levels)};
}

double lp_integral(const SampleFunction& x, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]), p) * x.weight(i);
  return acc;
}

double lp_integral(const StepFunction& x, double p) {
  return x.cumulative_power(x.total_measure(), p);
}

double lp_norm(const SampleFunction& x, double p) {
  if (std::isinf(p)) return sup_norm(x);
  return std::pow(lp_integral(x, p), 1.0 / p);
}

double sup_norm(const SampleFunction& x) {
  double m = 0.0;
  for (double v : x.values()) m = std::max(m, std::abs(v));
  return m;
}

MajorizationResult hardy_majorizes(const SampleFunction& x, const SampleFunction& y, double p,
                                   double slack) {
  const double mx = x.space()->total_measure();
  const double my = y.space()->total_measure();
  if (std::abs(mx - my) > 1e-12 * std::max(mx, my)) {
    throw std::invalid_argument("hardy_majorizes: total measures differ");
  }
  const StepFunction xs = rearrangement(x);
  const StepFunction ys = rearrangement(y);
  std::vector<double> ts(xs.breakpoints().begin(), xs.breakpoints().end());
  ts.insert(ts.end(), ys.breakpoints().begin(), ys.breakpoints().end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  MajorizationResult result{true, std::numeric_limits<double>::infinity(), 0.0};
  if (ts.empty()) result.worst_margin = 0.0;
  for (double t : ts) {
    const double margin = ys.cumulative_power(t, p) - xs.cumulative_power(t, p);
    if (margin < result.worst_margin) {
      result.worst_margin = margin;
      result.worst_t = t;
    }
  }
  result.holds = result.worst_margin >= -slack;
  return result;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw SpecError("function CSV line " + std::to_string(line) + ": not a number: '" + field + "'");
  }
}

}  // namespace

SampleFunction read_function_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<double> weights;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (lineno == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line = line.substr(3);  // UTF-8 BOM
      }
      if (line != "weight,value") throw SpecError("function CSV must start with header 'weight,value'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw SpecError("function CSV line " + std::to_string(lineno) + ": expected two fields");
    }
    const double w = parse_number(trim(line.substr(0, comma)), lineno);
    const double v = parse_number(trim(line.substr(comma + 1)), lineno);
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw SpecError("function CSV line " + std::to_string(lineno) + ": weight must be positive");
    }
    weights.push_back(w);
    values.push_back(v);
  }
  if (!header_seen) throw SpecError("function CSV is empty");
  if (weights.empty()) throw SpecError("function CSV has no atoms");
  return {DiscreteMeasureSpace::make(std::move(weights)), std::move(values)};
}

SampleFunction read_function_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open function CSV: " + path);
  return read_function_csv(in);
}

void write_function_csv(std::ostream& out, const SampleFunction& x) {
  out << "weight,value\n";
  char buf[64];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x.weight(i), x[i]);
    out << buf;
  }
}

}  // namespace orlint
