#include "orlint/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "orlint/constants.hpp"
#include "orlint/error.hpp"
#include "orlint/kfunc.hpp"
#include "orlint/numeric.hpp"
#include "orlint/quasiconcave.hpp"
#include "orlint/rng.hpp"

namespace orlint {

using io::Json;

namespace {

constexpr std::size_t kMaxListedViolations = 1000;

struct TheoremInfo {
  Theorem theorem;
  const char* tag;
};

constexpr TheoremInfo kTheorems[] = {
    {Theorem::Prop22, "prop22"},          {Theorem::SparrLemma, "sparr_lemma"},
    {Theorem::Thm31a, "thm31a"},          {Theorem::Thm31bNorm, "thm31b_norm"},
    {Theorem::Thm46a, "thm46a"},          {Theorem::Thm46bNorm, "thm46b_norm"},
    {Theorem::RemarkConcaveH, "remark_concave_h"}, {Theorem::Thm51Linear, "thm51_linear"},
};

bool is_norm_theorem(Theorem t) {
  return t == Theorem::Thm31bNorm || t == Theorem::Thm46bNorm || t == Theorem::RemarkConcaveH ||
         t == Theorem::Thm51Linear;
}

ConstantSource default_source(Theorem t) {
  switch (t) {
    case Theorem::Thm31bNorm: return ConstantSource::LpLinf;
    case Theorem::RemarkConcaveH: return ConstantSource::ConcaveH;
    case Theorem::Thm51Linear: return ConstantSource::Linear;
    default: return ConstantSource::Subadditive;
  }
}

double default_relative(Theorem t) { return is_norm_theorem(t) ? 1e-8 : 1e-9; }

// Per-input result, merged in index order so the report does not depend on
// the number of worker threads.
struct Outcome {
  std::vector<Violation> violations;
  double worst_margin = -kInf;
  bool hypothesis = true;
};

void compare(Outcome& out, double lhs, double rhs, double t, int index, const char* check, const Tolerances& tol) {
  double margin = 0.0;
  bool violated = false;
  if (rhs > 0.0 && std::isfinite(rhs)) {
    margin = (lhs - rhs) / rhs;
    violated = margin > tol.relative;
  } else if (rhs == 0.0) {
    margin = lhs - rhs;
    violated = margin > tol.absolute;
  } else {
    margin = lhs == kInf ? 0.0 : -kInf;  // rhs = inf: nothing to check
  }
  if (std::isnan(lhs)) {
    margin = kInf;
    violated = true;
  }
  out.worst_margin = std::max(out.worst_margin, margin);
  if (violated) out.violations.push_back({t, index, lhs, rhs, margin, check});
}

template <typename F>
std::vector<Outcome> parallel_map(std::size_t n, int jobs, F&& f) {
  std::vector<Outcome> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (threads == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < std::min(threads, n); ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

Json values_json(const SampleFunction& x) {
  Json out = Json::array();
  for (double v : x.values()) out.push_back(io::number_json(v));
  return out;
}

VerificationReport aggregate(const std::vector<Outcome>& outcomes,
                             const std::function<Json(int)>& witness_of) {
  VerificationReport report;
  report.trials = static_cast<int>(outcomes.size());
  int witness = -1;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (o.hypothesis) ++report.hypothesis_met;
    report.worst_margin = std::max(report.worst_margin, o.worst_margin);
    report.violation_count += static_cast<int>(o.violations.size());
    if (!o.violations.empty() && witness < 0) witness = static_cast<int>(i);
    for (const auto& v : o.violations) {
      if (report.violations.size() < kMaxListedViolations) report.violations.push_back(v);
    }
  }
  report.status = report.violation_count == 0 ? Status::Pass : Status::Fail;
  if (witness >= 0) report.witness = witness_of(witness);
  return report;
}

VerificationReport rejected(std::string reason) {
  VerificationReport report;
  report.status = Status::Rejected;
  report.reason = std::move(reason);
  return report;
}

std::function<Json(int)> single_witness(const std::vector<SampleFunction>& inputs) {
  return [&inputs](int i) {
    Json w;
    w["input_index"] = i;
    w["x"] = values_json(inputs[static_cast<std::size_t>(i)]);
    return w;
  };
}

}  // namespace

std::string to_string(Theorem theorem) {
  for (const auto& info : kTheorems) {
    if (info.theorem == theorem) return info.tag;
  }
  return "unknown";
}

Theorem theorem_from_string(const std::string& tag) {
  for (const auto& info : kTheorems) {
    if (tag == info.tag) return info.theorem;
  }
  throw SpecError("unknown theorem tag '" + tag + "'");
}

std::string to_string(ConstantSource source) {
  switch (source) {
    case ConstantSource::Subadditive: return "subadditive";
    case ConstantSource::LpLinf: return "lp_linf";
    case ConstantSource::ConcaveH: return "concave_h";
    case ConstantSource::Linear: return "linear";
  }
  return "subadditive";
}

ConstantSource constant_source_from_string(const std::string& tag) {
  for (auto s : {ConstantSource::Subadditive, ConstantSource::LpLinf, ConstantSource::ConcaveH,
                 ConstantSource::Linear}) {
    if (tag == to_string(s)) return s;
  }
  throw SpecError("unknown constant source '" + tag + "'");
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Rejected: return "rejected";
  }
  return "fail";
}

std::vector<double> TGrid::values() const { return numeric::log_grid(start, stop, static_cast<std::size_t>(points)); }

// ---------------------------------------------------------------- scenarios

Scenario Scenario::from_json(const Json& json) {
  io::require_keys(json,
                   {"theorem", "couple", "phi", "operator", "constant", "inputs", "t_grid", "tolerances",
                    "bound_scale", "diagnostic_chain"},
                   "scenario");
  Scenario s;
  if (!json.contains("theorem") || !json.at("theorem").is_string()) throw SpecError("scenario needs 'theorem'");
  s.theorem = theorem_from_string(json.at("theorem").get<std::string>());
  if (!json.contains("couple")) throw SpecError("scenario needs 'couple'");
  s.couple = io::couple_from_json(json.at("couple"));

  const bool needs_phi = s.theorem != Theorem::Prop22 && s.theorem != Theorem::SparrLemma;
  const bool needs_op = s.theorem != Theorem::SparrLemma;
  if (json.contains("phi")) {
    if (!needs_phi) throw SpecError("theorem " + to_string(s.theorem) + " takes no 'phi'");
    s.phi = io::normalize_phi(json.at("phi"));
  } else if (needs_phi) {
    throw SpecError("theorem " + to_string(s.theorem) + " needs 'phi'");
  }
  if (json.contains("operator")) {
    if (!needs_op) throw SpecError("theorem " + to_string(s.theorem) + " takes no 'operator'");
    s.op = io::normalize_operator(json.at("operator"));
  } else if (needs_op) {
    throw SpecError("theorem " + to_string(s.theorem) + " needs 'operator'");
  }
  if (json.contains("constant")) {
    if (!is_norm_theorem(s.theorem)) throw SpecError("'constant' only applies to norm theorems");
    if (!json.at("constant").is_string()) throw SpecError("'constant' must be a string");
    s.constant = constant_source_from_string(json.at("constant").get<std::string>());
  } else if (is_norm_theorem(s.theorem)) {
    s.constant = default_source(s.theorem);
  }

  if (!json.contains("inputs")) throw SpecError("scenario needs 'inputs'");
  const Json& in = json.at("inputs");
  io::require_keys(in, {"count", "atoms", "distribution", "seed", "weight"}, "inputs");
  if (!in.contains("seed") || !io::is_seed(in.at("seed"))) {
    throw SpecError("inputs need an unsigned integer 'seed'");
  }
  s.inputs.seed = in.at("seed").get<std::uint64_t>();
  s.inputs.count = in.value("count", s.inputs.count);
  s.inputs.atoms = in.value("atoms", s.inputs.atoms);
  s.inputs.distribution = in.value("distribution", s.inputs.distribution);
  s.inputs.weight = in.value("weight", s.inputs.weight);
  if (s.inputs.count < 1 || s.inputs.atoms < 1) throw SpecError("inputs need count >= 1 and atoms >= 1");
  if (!(s.inputs.weight > 0.0)) throw SpecError("inputs need weight > 0");
  static const std::set<std::string> kDistributions{"mixed", "uniform", "lognormal", "spikes", "constant"};
  if (!kDistributions.contains(s.inputs.distribution)) {
    throw SpecError("unknown input distribution '" + s.inputs.distribution + "'");
  }

  if (json.contains("t_grid")) {
    const Json& g = json.at("t_grid");
    io::require_keys(g, {"start", "stop", "points"}, "t_grid");
    s.t_grid.start = g.value("start", s.t_grid.start);
    s.t_grid.stop = g.value("stop", s.t_grid.stop);
    s.t_grid.points = g.value("points", s.t_grid.points);
  }
  if (!(s.t_grid.start > 0.0) || !(s.t_grid.stop >= s.t_grid.start) || s.t_grid.points < 1) {
    throw SpecError("t_grid needs 0 < start <= stop and points >= 1");
  }

  s.tolerances.relative = default_relative(s.theorem);
  if (json.contains("tolerances")) {
    const Json& t = json.at("tolerances");
    io::require_keys(t, {"relative", "absolute", "hypothesis"}, "tolerances");
    s.tolerances.relative = t.value("relative", s.tolerances.relative);
    s.tolerances.absolute = t.value("absolute", s.tolerances.absolute);
    s.tolerances.hypothesis = t.value("hypothesis", s.tolerances.hypothesis);
  }
  s.bound_scale = json.value("bound_scale", 1.0);
  if (!(s.bound_scale > 0.0)) throw SpecError("bound_scale must be positive");
  s.diagnostic_chain = json.value("diagnostic_chain", false);
  if (s.diagnostic_chain && s.theorem != Theorem::Thm46bNorm) {
    throw SpecError("diagnostic_chain only applies to thm46b_norm");
  }
  return s;
}

Json Scenario::to_json() const {
  Json out;
  out["theorem"] = to_string(theorem);
  out["couple"] = io::couple_json(couple);
  if (phi) out["phi"] = *phi;
  if (op) out["operator"] = *op;
  if (constant) out["constant"] = to_string(*constant);
  out["inputs"] = {{"count", inputs.count},
                   {"atoms", inputs.atoms},
                   {"distribution", inputs.distribution},
                   {"seed", inputs.seed},
                   {"weight", inputs.weight}};
  out["t_grid"] = {{"start", t_grid.start}, {"stop", t_grid.stop}, {"points", t_grid.points}};
  out["tolerances"] = {
      {"relative", tolerances.relative}, {"absolute", tolerances.absolute}, {"hypothesis", tolerances.hypothesis}};
  out["bound_scale"] = bound_scale;
  out["diagnostic_chain"] = diagnostic_chain;
  return out;
}

Scenario Scenario::refined() const {
  Scenario s = *this;
  s.inputs.count *= 2;
  s.t_grid.points *= 2;
  return s;
}

Json VerificationReport::to_json(bool include_timing) const {
  Json out;
  out["scenario"] = scenario;
  out["status"] = to_string(status);
  if (!reason.empty()) out["reason"] = reason;
  out["trials"] = trials;
  out["hypothesis_met"] = hypothesis_met;
  out["violation_count"] = violation_count;
  out["worst_margin"] = io::number_json(worst_margin);
  Json list = Json::array();
  for (const auto& v : violations) {
    Json item;
    item["t"] = std::isnan(v.t) ? Json(nullptr) : io::number_json(v.t);
    item["input_index"] = v.input_index;
    item["lhs"] = io::number_json(v.lhs);
    item["rhs"] = io::number_json(v.rhs);
    item["margin"] = io::number_json(v.margin);
    item["check"] = v.check;
    list.push_back(item);
  }
  out["violations"] = list;
  if (witness) out["witness"] = *witness;
  if (!notes.empty()) out["notes"] = notes;
  if (include_timing) out["wall_ms"] = io::number_json(wall_ms);
  return out;
}

// ------------------------------------------------------------------- inputs

namespace {

std::vector<double> draw_values(std::size_t n, Rng& rng, const std::string& distribution) {
  std::string kind = distribution;
  if (kind == "mixed") {
    static const char* kKinds[] = {"uniform", "lognormal", "spikes", "constant"};
    kind = kKinds[rng.below(4)];
  }
  std::vector<double> v(n, 0.0);
  if (kind == "uniform") {
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  } else if (kind == "lognormal") {
    for (auto& x : v) x = rng.sign() * std::exp(1.5 * rng.normal());
  } else if (kind == "spikes") {
    const std::size_t spikes = 1 + rng.below(std::min<std::size_t>(n, 3));
    for (std::size_t k = 0; k < spikes; ++k) v[rng.below(n)] = rng.sign() * std::exp(rng.normal());
  } else {
    std::fill(v.begin(), v.end(), rng.uniform(0.2, 2.0));
  }
  const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
  for (auto& x : v) x *= scale;
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = scale;
  return v;
}

}  // namespace

std::vector<SampleFunction> generate_inputs(const InputSpec& spec, const SpacePtr& space) {
  const Rng root(spec.seed);
  std::vector<SampleFunction> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    out.emplace_back(space, draw_values(space->size(), rng, spec.distribution));
  }
  return out;
}

// ---------------------------------------------------------------- verifiers

VerificationReport verify_k_contraction(const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                        const ExponentCouple& couple, const std::vector<double>& t_grid,
                                        const Tolerances& tol, const RunOptions& run) {
  const double m = op.admissible_bound(couple);
  auto k = [&couple](double t, const SampleFunction& x) {
    return couple.q_infinite() ? k_lp_linf(t, x, couple.p).value : l_functional(t, x, couple).value;
  };
  auto outcomes = parallel_map(inputs.size(), run.jobs, [&](std::size_t i) {
    Outcome out;
    const SampleFunction tx = op(inputs[i]).scaled(1.0 / m);
    for (double t : t_grid) compare(out, k(t, tx), k(t, inputs[i]), t, static_cast<int>(i), "k_functional", tol);
    return out;
  });
  return aggregate(outcomes, single_witness(inputs));
}

VerificationReport verify_sparr_implication(const std::vector<SampleFunction>& xs,
                                            const std::vector<SampleFunction>& ys, const ExponentCouple& couple,
                                            const std::vector<double>& t_grid, const Tolerances& tol,
                                            const RunOptions& run) {
  if (couple.q_infinite()) return rejected("the Sparr lemma needs finite q");
  if (xs.size() != ys.size()) throw std::invalid_argument("verify_sparr_implication: xs and ys differ in length");
  const double gamma = sparr_gamma(couple.p, couple.q).value;
  auto outcomes = parallel_map(xs.size(), run.jobs, [&](std::size_t i) {
    Outcome out;
    for (double t : t_grid) {
      const double kx = l_functional(t, xs[i], couple).value;
      const double ky = l_functional(t, ys[i], couple).value;
      if (kx > ky * (1.0 + tol.hypothesis) + (ky == 0.0 ? tol.hypothesis : 0.0)) {
        out.hypothesis = false;
        return out;
      }
    }
    for (double t : t_grid) {
      compare(out, l_star_functional(t, xs[i], couple), gamma * l_star_functional(t, ys[i], couple), t,
              static_cast<int>(i), "k_star", tol);
    }
    return out;
  });
  auto report = aggregate(outcomes, [&](int i) {
    Json w;
    w["input_index"] = i;
    w["x"] = values_json(xs[static_cast<std::size_t>(i)]);
    w["y"] = values_json(ys[static_cast<std::size_t>(i)]);
    return w;
  });
  report.notes.push_back("gamma = " + io::format_number(gamma));
  return report;
}

namespace {

// psi(u) = phi(u^(1/p)) on uniform grids [0, 10^k] per decade, inside the domain.
ConvexityCheck psi_convexity(const OrliczFunction& phi, double p) {
  auto psi = [&phi, p](double u) { return phi.eval_or_inf(std::pow(u, 1.0 / p)); };
  const double top = std::isfinite(phi.u_max()) ? std::pow(phi.u_max(), p) : 1e8;
  ConvexityCheck result{true, 0.0, 0.0};
  for (int k = -8; k <= 8; ++k) {
    const double hi = std::min(std::pow(10.0, k), top);
    const auto grid = numeric::linear_grid(0.0, hi, 400);
    const auto check = check_convexity(psi, grid);
    if (!check.ok) return check;
    if (hi == top) break;
  }
  return result;
}

}  // namespace

VerificationReport verify_modular_lp_linf(const OrliczFunction& phi, double p, const CertifiedOperator& op,
                                          const std::vector<SampleFunction>& inputs, const Tolerances& tol,
                                          const RunOptions& run) {
  const auto convex = psi_convexity(phi, p);
  if (!convex.ok) {
    return rejected("psi(u) = phi(u^(1/p)) is not convex near u = " + io::format_number(convex.worst_at));
  }
  const double m = std::max(op.bound(p), op.bound(kInf));
  const double c = bergh_constant(p);
  auto outcomes = parallel_map(inputs.size(), run.jobs, [&](std::size_t i) {
    Outcome out;
    const double lhs = modular_or_inf(phi, op(inputs[i]), 1.0 / (c * m));
    compare(out, lhs, modular_or_inf(phi, inputs[i]), std::nan(""), static_cast<int>(i), "modular", tol);
    return out;
  });
  auto report = aggregate(outcomes, single_witness(inputs));
  report.notes.push_back("M = " + io::format_number(m) + ", constant 2^(1-1/p) = " + io::format_number(c));
  return report;
}

VerificationReport verify_modular_lp_lq(const OrliczFunction& phi, const ExponentCouple& couple,
                                        const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                        const Tolerances& tol, const RunOptions& run) {
  if (couple.q_infinite()) return rejected("the h-form modular inequality needs finite q");
  if (phi.kind() != OrliczFunction::Kind::ConcaveH) {
    return rejected("phi must be given as u^q h(u^(p-q)) with piecewise linear concave h");
  }
  if (!(phi.couple() == couple)) return rejected("phi and scenario use different exponent couples");
  const double m = op.admissible_bound(couple);
  const double gamma = sparr_gamma(couple.p, couple.q).value;
  auto outcomes = parallel_map(inputs.size(), run.jobs, [&](std::size_t i) {
    Outcome out;
    const double lhs = modular_or_inf(phi, op(inputs[i]), 1.0 / m);
    compare(out, lhs, gamma * modular_or_inf(phi, inputs[i]), std::nan(""), static_cast<int>(i), "modular", tol);
    return out;
  });
  auto report = aggregate(outcomes, single_witness(inputs));
  report.notes.push_back("M = " + io::format_number(m) + ", gamma = " + io::format_number(gamma));
  return report;
}

double interpolation_constant(ConstantSource source, const ExponentCouple& couple, const CertifiedOperator& op) {
  switch (source) {
    case ConstantSource::LpLinf:
      if (!couple.q_infinite()) throw SpecError("constant lp_linf needs q = inf");
      return bergh_constant(couple.p);
    case ConstantSource::Subadditive:
      if (couple.q_infinite()) throw SpecError("constant subadditive needs finite q");
      return interp_constant_subadditive(couple.p, couple.q);
    case ConstantSource::ConcaveH:
      if (couple.q_infinite()) throw SpecError("constant concave_h needs finite q");
      return interp_constant_concave_h(couple.p, couple.q);
    case ConstantSource::Linear:
      if (op.kind() != OperatorKind::Linear) throw SpecError("constant linear needs a linear operator");
      if (couple.q_infinite() || !(couple.p > 1.0)) throw SpecError("constant linear needs 1 < p < q < inf");
      return interp_constant_linear(couple.p, couple.q);
  }
  throw SpecError("unknown constant source");
}

VerificationReport verify_norm_interpolation(const OrliczFunction& phi, const ExponentCouple& couple,
                                             const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                             ConstantSource source, const Tolerances& tol, const RunOptions& run) {
  const double c = interpolation_constant(source, couple, op);
  const double m = op.admissible_bound(couple);
  auto outcomes = parallel_map(inputs.size(), run.jobs, [&](std::size_t i) {
    Outcome out;
    const SampleFunction tx = op(inputs[i]);
    const int idx = static_cast<int>(i);
    compare(out, luxemburg_norm(phi, tx), c * m * luxemburg_norm(phi, inputs[i]), std::nan(""), idx, "luxemburg",
            tol);
    compare(out, amemiya_norm(phi, tx), c * m * amemiya_norm(phi, inputs[i]), std::nan(""), idx, "amemiya", tol);
    return out;
  });
  auto report = aggregate(outcomes, single_witness(inputs));
  report.notes.push_back("M = " + io::format_number(m) + ", C = " + io::format_number(c) + " (" + to_string(source) + ")");
  return report;
}

VerificationReport verify_diagnostic_chain(const OrliczFunction& phi, const ExponentCouple& couple,
                                           const CertifiedOperator& op, const std::vector<SampleFunction>& inputs,
                                           const Tolerances& tol, const RunOptions& run) {
  if (couple.q_infinite()) return rejected("the diagnostic chain needs finite q");
  const double m = op.admissible_bound(couple);
  const double gamma = sparr_gamma(couple.p, couple.q).value;
  const double e = couple.p - couple.q;

  // h~ is built on a log grid spanning the magnitudes in play, plus the exact
  // s = u^(p-q) of every atom value, where h~(s) <= 2 h(s) holds without
  // interpolation error.
  std::vector<SampleFunction> images;
  images.reserve(inputs.size());
  std::set<double> knots;
  double u_lo = kInf;
  double u_hi = 0.0;
  auto add = [&](const SampleFunction& x) {
    for (double v : x.values()) {
      const double u = std::abs(v);
      if (u == 0.0 || u > phi.u_max()) continue;
      knots.insert(std::pow(u, e));
      u_lo = std::min(u_lo, u);
      u_hi = std::max(u_hi, u);
    }
  };
  for (const auto& x : inputs) {
    images.push_back(op(x).scaled(1.0 / m));
    add(x);
    add(images.back());
  }
  if (knots.empty()) return rejected("all inputs vanish");
  const double s_lo = std::pow(std::min(u_hi * 10.0, phi.u_max()), e);
  const double s_hi = std::pow(u_lo / 10.0, e);
  for (double s : numeric::decade_grid(s_lo, s_hi, 64)) knots.insert(s);
  const auto h = lemma_h(phi, couple);
  const PiecewiseLinearConcave h_tilde = concave_majorant(h, std::vector<double>(knots.begin(), knots.end()));
  const OrliczFunction psi = build_from_h(couple, h_tilde);

  auto outcomes = parallel_map(inputs.size(), run.jobs, [&](std::size_t i) {
    Outcome out;
    const int idx = static_cast<int>(i);
    const double nan = std::nan("");
    const double phi_tx = modular_or_inf(phi, images[i]);
    const double psi_tx = modular_or_inf(psi, images[i]);
    const double psi_x = modular_or_inf(psi, inputs[i]);
    const double phi_x = modular_or_inf(phi, inputs[i]);
    compare(out, phi_tx, psi_tx, nan, idx, "I_phi(Tx/M) <= I_psi(Tx/M)", tol);
    compare(out, psi_tx, gamma * psi_x, nan, idx, "I_psi(Tx/M) <= gamma I_psi(x)", tol);
    compare(out, gamma * psi_x, 2.0 * gamma * phi_x, nan, idx, "gamma I_psi(x) <= 2 gamma I_phi(x)", tol);
    return out;
  });
  auto report = aggregate(outcomes, single_witness(inputs));
  report.notes.push_back("majorant knots = " + std::to_string(h_tilde.knots().size()));
  return report;
}

// ----------------------------------------------------------------- dispatch

namespace {

// Keeps every input inside the domain of a phi with finite u_max.
void fit_domain(std::vector<SampleFunction>& inputs, const OrliczFunction& phi) {
  if (!std::isfinite(phi.u_max())) return;
  for (auto& x : inputs) {
    const double sup = sup_norm(x);
    if (sup > 0.5 * phi.u_max()) x = x.scaled(0.5 * phi.u_max() / sup);
  }
}

// Pairs (x, y) for the Sparr lemma. Most x are images of y under maps that
// cannot increase K_{p,q}(t, .): atomwise damping and convex combinations of
// signed permutations. The rest are independent draws, left to the
// hypothesis filter.
std::vector<SampleFunction> sparr_partners(const std::vector<SampleFunction>& ys, std::uint64_t seed) {
  const Rng root = Rng(seed).split(0x5A4E);
  std::vector<SampleFunction> xs;
  xs.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    Rng rng = root.split(i);
    const SampleFunction& y = ys[i];
    const std::size_t n = y.size();
    std::vector<double> x(n, 0.0);
    const double mode = rng.uniform();
    if (mode < 0.35) {
      for (std::size_t k = 0; k < n; ++k) x[k] = rng.uniform() * y[k];
    } else if (mode < 0.7) {
      const int terms = 1 + static_cast<int>(rng.below(3));
      std::vector<double> w(static_cast<std::size_t>(terms));
      double total = 0.0;
      for (auto& v : w) total += (v = rng.uniform(0.1, 1.0));
      for (int t = 0; t < terms; ++t) {
        std::vector<std::size_t> perm(n);
        for (std::size_t k = 0; k < n; ++k) perm[k] = k;
        for (std::size_t k = n; k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
        for (std::size_t k = 0; k < n; ++k) x[k] += rng.sign() * w[static_cast<std::size_t>(t)] / total * y[perm[k]];
      }
    } else if (mode < 0.9) {
      const double sup_y = sup_norm(y);
      for (auto& v : x) v = rng.uniform(-1.0, 1.0) * sup_y;
    } else {
      x.assign(y.values().begin(), y.values().end());
    }
    xs.push_back(y.with_values(std::move(x)));
  }
  return xs;
}

void require_generator_or_power(const OrliczFunction& phi, const ExponentCouple& couple, const char* theorem) {
  if (phi.kind() == OrliczFunction::Kind::Generator) {
    if (!(phi.couple() == couple)) {
      throw SpecError(std::string(theorem) + ": generator phi must use the scenario couple");
    }
    return;
  }
  if (phi.kind() == OrliczFunction::Kind::Power) return;
  throw SpecError(std::string(theorem) + " needs a generator or power phi");
}

}  // namespace

VerificationReport run_scenario(const Scenario& scenario, const RunOptions& run) {
  const auto start = std::chrono::steady_clock::now();
  const SpacePtr space =
      DiscreteMeasureSpace::uniform(static_cast<std::size_t>(scenario.inputs.atoms), scenario.inputs.weight);
  std::vector<SampleFunction> inputs = generate_inputs(scenario.inputs, space);
  const std::vector<double> t_grid = scenario.t_grid.values();
  const ExponentCouple& couple = scenario.couple;

  std::optional<CertifiedOperator> op;
  if (scenario.op) op = io::build_operator(*scenario.op, space).with_scaled_bounds(scenario.bound_scale);
  std::optional<OrliczFunction> phi;
  if (scenario.phi) {
    phi = io::build_phi(*scenario.phi);
    fit_domain(inputs, *phi);
  }

  VerificationReport report;
  switch (scenario.theorem) {
    case Theorem::Prop22:
      report = verify_k_contraction(*op, inputs, couple, t_grid, scenario.tolerances, run);
      break;
    case Theorem::SparrLemma: {
      const auto xs = sparr_partners(inputs, scenario.inputs.seed);
      report = verify_sparr_implication(xs, inputs, couple, t_grid, scenario.tolerances, run);
      break;
    }
    case Theorem::Thm31a:
      if (!couple.q_infinite()) throw SpecError("thm31a needs q = inf");
      report = verify_modular_lp_linf(*phi, couple.p, *op, inputs, scenario.tolerances, run);
      break;
    case Theorem::Thm46a:
      report = verify_modular_lp_lq(*phi, couple, *op, inputs, scenario.tolerances, run);
      break;
    case Theorem::Thm31bNorm:
    case Theorem::Thm46bNorm:
    case Theorem::RemarkConcaveH:
    case Theorem::Thm51Linear: {
      const std::string tag = to_string(scenario.theorem);
      if (scenario.theorem == Theorem::RemarkConcaveH) {
        if (phi->kind() != OrliczFunction::Kind::ConcaveH || !(phi->couple() == couple)) {
          throw SpecError("remark_concave_h needs an h phi on the scenario couple");
        }
      } else {
        require_generator_or_power(*phi, couple, tag.c_str());
      }
      report = verify_norm_interpolation(*phi, couple, *op, inputs, *scenario.constant, scenario.tolerances, run);
      if (scenario.theorem == Theorem::Thm31bNorm && phi->kind() == OrliczFunction::Kind::Generator) {
        const auto onto = rho_star_surjective(io::build_rho(scenario.phi->at("rho")));
        report.notes.push_back(std::string("rho_* onto (0, inf): ") + (onto.onto ? "yes" : "no"));
      }
      if (scenario.diagnostic_chain && report.status != Status::Rejected) {
        if (phi->kind() != OrliczFunction::Kind::Generator) {
          throw SpecError("diagnostic_chain needs a generator phi");
        }
        auto chain = verify_diagnostic_chain(*phi, couple, *op, inputs, scenario.tolerances, run);
        if (chain.status == Status::Rejected) {
          report.notes.push_back("diagnostic chain rejected: " + chain.reason);
        } else {
          report.violation_count += chain.violation_count;
          report.worst_margin = std::max(report.worst_margin, chain.worst_margin);
          for (const auto& v : chain.violations) {
            if (report.violations.size() < kMaxListedViolations) report.violations.push_back(v);
          }
          if (!report.witness) report.witness = chain.witness;
          if (chain.status == Status::Fail) report.status = Status::Fail;
          for (const auto& note : chain.notes) report.notes.push_back(note);
        }
      }
      break;
    }
  }
  report.scenario = scenario.to_json();
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace orlint
