#include "orlint/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "orlint/rng.hpp"

namespace orlint {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Linear: return "linear";
    case OperatorKind::Sublinear: return "sublinear";
    case OperatorKind::Subadditive: return "subadditive";
  }
  return "subadditive";
}

CertifiedOperator::CertifiedOperator(std::string name, OperatorKind kind, SpacePtr space, Apply apply,
                                     Bound bound, std::string certificate)
    : name_(std::move(name)),
      kind_(kind),
      space_(std::move(space)),
      apply_(std::move(apply)),
      bound_(std::move(bound)),
      certificate_(std::move(certificate)) {
  if (!space_ || !apply_ || !bound_) throw std::invalid_argument("certified operator is incomplete");
}

SampleFunction CertifiedOperator::operator()(const SampleFunction& x) const {
  if (!(x.space() == space_ || *x.space() == *space_)) {
    throw std::invalid_argument("operator '" + name_ + "' applied to a function on a different space");
  }
  return apply_(x);
}

double CertifiedOperator::admissible_bound(const ExponentCouple& couple) const {
  return std::max(bound(couple.p), bound(couple.q));
}

CertifiedOperator CertifiedOperator::with_scaled_bounds(double factor) const {
  auto scaled = [b = bound_, factor](double r) { return factor * b(r); };
  std::ostringstream cert;
  cert << certificate_ << "; bounds scaled by " << factor;
  return {name_, kind_, space_, apply_, scaled, cert.str()};
}

namespace {

void require_uniform(const SpacePtr& space, const char* who) {
  if (!space->is_uniform()) {
    throw std::invalid_argument(std::string(who) + " needs uniform atom weights");
  }
}

double interpolated_bound(double col, double row, double r) {
  if (std::isinf(r)) return row;
  return std::pow(col, 1.0 / r) * std::pow(row, 1.0 - 1.0 / r);
}

}  // namespace

CertifiedOperator contractive_matrix(const SpacePtr& space, const Matrix& a, std::string name) {
  require_uniform(space, "contractive_matrix");
  const std::size_t n = space->size();
  if (a.size() != n) throw std::invalid_argument("contractive_matrix: matrix must be n x n");
  std::vector<double> col(n, 0.0);
  double row_max = 0.0;
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("contractive_matrix: matrix must be n x n");
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(row[j])) throw std::invalid_argument("contractive_matrix: entries must be finite");
      s += std::abs(row[j]);
      col[j] += std::abs(row[j]);
    }
    row_max = std::max(row_max, s);
  }
  const double col_max = n == 0 ? 0.0 : *std::max_element(col.begin(), col.end());
  if (row_max > 1.0 + 1e-12 || col_max > 1.0 + 1e-12) {
    throw std::invalid_argument("contractive_matrix: row or column l1 norm exceeds 1");
  }
  auto apply = [a](const SampleFunction& x) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < out.size(); ++j) out[i] += a[i][j] * x[j];
    }
    return x.with_values(std::move(out));
  };
  auto bound = [col_max, row_max](double r) { return interpolated_bound(col_max, row_max, r); };
  std::ostringstream cert;
  cert << "linear, max row l1 = " << row_max << ", max column l1 = " << col_max
       << "; ||A||_r <= col^(1/r) row^(1-1/r)";
  return {std::move(name), OperatorKind::Linear, space, apply, bound, cert.str()};
}

CertifiedOperator identity_operator(const SpacePtr& space) {
  return multiplier(space, std::vector<double>(space->size(), 1.0), "identity");
}

CertifiedOperator averaging_operator(const SpacePtr& space) {
  const std::size_t n = space->size();
  return contractive_matrix(space, Matrix(n, std::vector<double>(n, 1.0 / static_cast<double>(n))), "averaging");
}

CertifiedOperator shift_operator(const SpacePtr& space, double scale) {
  const std::size_t n = space->size();
  Matrix a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i][(i + 1) % n] = scale;
  return contractive_matrix(space, a, "shift");
}

CertifiedOperator multiplier(const SpacePtr& space, std::vector<double> m, std::string name) {
  if (m.size() != space->size()) throw std::invalid_argument("multiplier length must match atom count");
  double m_max = 0.0;
  for (double v : m) {
    if (!(std::abs(v) <= 1.0)) throw std::invalid_argument("multiplier entries must satisfy |m_i| <= 1");
    m_max = std::max(m_max, std::abs(v));
  }
  auto apply = [m](const SampleFunction& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m[i] * x[i];
    return x.with_values(std::move(out));
  };
  std::ostringstream cert;
  cert << "linear pointwise multiplier, max |m| = " << m_max;
  return {std::move(name), OperatorKind::Linear, space, apply, [m_max](double) { return m_max; }, cert.str()};
}

CertifiedOperator max_of(const std::vector<CertifiedOperator>& ops, std::string name) {
  if (ops.empty()) throw std::invalid_argument("max_of needs at least one operator");
  const SpacePtr space = ops.front().space();
  bool all_linear = true;
  for (const auto& op : ops) {
    if (!(op.space() == space || *op.space() == *space)) throw std::invalid_argument("max_of: space mismatch");
    all_linear = all_linear && op.kind() == OperatorKind::Linear;
  }
  auto apply = [ops](const SampleFunction& x) {
    std::vector<double> out(x.size(), 0.0);
    for (const auto& op : ops) {
      const SampleFunction y = op(x);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(y[i]));
    }
    return x.with_values(std::move(out));
  };
  // Pointwise max_j |y_j| <= (sum_j |y_j|^r)^(1/r), so norms add in l^r.
  auto bound = [ops](double r) {
    if (std::isinf(r)) {
      double m = 0.0;
      for (const auto& op : ops) m = std::max(m, op.bound(r));
      return m;
    }
    double acc = 0.0;
    for (const auto& op : ops) acc += std::pow(op.bound(r), r);
    return std::pow(acc, 1.0 / r);
  };
  std::ostringstream cert;
  cert << "pointwise max of " << ops.size() << " operators; bound (sum_j M_j(r)^r)^(1/r)";
  return {std::move(name), all_linear ? OperatorKind::Sublinear : OperatorKind::Subadditive, space, apply, bound,
          cert.str()};
}

CertifiedOperator discrete_maximal(const SpacePtr& space) {
  require_uniform(space, "discrete_maximal");
  const std::size_t n = space->size();
  auto apply = [](const SampleFunction& x) {
    const std::size_t m = x.size();
    std::vector<double> prefix(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + std::abs(x[i]);
    std::vector<double> out(m, 0.0);
    for (std::size_t lo = 0; lo < m; ++lo) {
      for (std::size_t hi = lo + 1; hi <= m; ++hi) {
        const double avg = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) out[i] = std::max(out[i], avg);
      }
    }
    return x.with_values(std::move(out));
  };
  // Two certificates, the smaller one wins:
  //  * composition: each window average is doubly substochastic, so the max_of
  //    rule gives N^(1/r) for N = n(n+1)/2 windows;
  //  * x -> (A_W x)_W is linear into L^r(l^inf) with norm B1 = max_k ||T e_k||_1
  //    on L^1 (positivity plus the triangle inequality) and 1 on L^inf; the
  //    Riesz-Thorin theorem for l^inf-valued L^r gives B1^(1/r).
  const double windows = static_cast<double>(n * (n + 1) / 2);
  double b1 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    const SampleFunction te = apply(SampleFunction(space, e));
    double s = 0.0;
    for (double v : te.values()) s += v;
    b1 = std::max(b1, s);
  }
  auto bound = [windows, b1](double r) {
    if (std::isinf(r)) return 1.0;
    return std::min(std::pow(windows, 1.0 / r), std::pow(b1, 1.0 / r));
  };
  std::ostringstream cert;
  cert << "max over " << windows << " window averages; bound min(N^(1/r), B1^(1/r)) with B1 = " << b1
       << ", 1 on L^inf";
  return {"maximal", OperatorKind::Sublinear, space, apply, bound, cert.str()};
}

namespace {

SampleFunction random_input(const SpacePtr& space, Rng& rng, int kind) {
  const std::size_t n = space->size();
  std::vector<double> v(n, 0.0);
  switch (kind % 4) {
    case 0:
      for (auto& x : v) x = rng.uniform(-1.0, 1.0);
      break;
    case 1:
      for (auto& x : v) x = rng.sign() * std::exp(1.5 * rng.normal());
      break;
    case 2:
      v[rng.below(n)] = 1.0;
      if (n > 1 && rng.uniform() < 0.5) v[rng.below(n)] += rng.uniform(-1.0, 1.0);
      break;
    default:
      std::fill(v.begin(), v.end(), rng.uniform(0.1, 2.0));
      break;
  }
  return {space, std::move(v)};
}

double ratio(const CertifiedOperator& op, const SampleFunction& x, double r) {
  const double denom = lp_norm(x, r);
  if (denom == 0.0) return 0.0;
  return lp_norm(op(x), r) / denom;
}

}  // namespace

double estimate_norm(const CertifiedOperator& op, double r, int trials, std::uint64_t seed) {
  const SpacePtr& space = op.space();
  const std::size_t n = space->size();
  Rng root(seed);
  double best = 0.0;
  std::vector<double> best_x(n, 1.0);
  auto consider = [&](const SampleFunction& x) {
    const double v = ratio(op, x, r);
    if (v > best) {
      best = v;
      best_x.assign(x.values().begin(), x.values().end());
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    consider(SampleFunction(space, e));
  }
  consider(SampleFunction(space, std::vector<double>(n, 1.0)));
  for (int i = 0; i < trials; ++i) {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    consider(random_input(space, rng, i));
  }
  // Boosting: reweight toward atoms where |Tx| is large.
  std::vector<double> x = best_x;
  for (int step = 0; step < 50; ++step) {
    const SampleFunction tx = op(SampleFunction(space, x));
    const double top = sup_norm(tx);
    if (top == 0.0) break;
    const double power = std::isinf(r) ? 1.0 : std::max(r - 1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(std::abs(tx[i]) / top, power);
    consider(SampleFunction(space, x));
  }
  return best;
}

SubadditivityProbe probe_subadditivity(const CertifiedOperator& op, int pairs, std::uint64_t seed, double slack) {
  SubadditivityProbe probe;
  Rng root(seed);
  for (int i = 0; i < pairs; ++i) {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    const SampleFunction x = random_input(op.space(), rng, static_cast<int>(rng.below(4)));
    const SampleFunction y = random_input(op.space(), rng, static_cast<int>(rng.below(4)));
    std::vector<double> sum(x.size());
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = x[k] + y[k];
    const SampleFunction tsum = op(x.with_values(std::move(sum)));
    const SampleFunction tx = op(x);
    const SampleFunction ty = op(y);
    for (std::size_t k = 0; k < tsum.size(); ++k) {
      const double rhs = std::abs(tx[k]) + std::abs(ty[k]);
      const double excess = (std::abs(tsum[k]) - rhs) / std::max(rhs, 1e-300);
      if (std::abs(tsum[k]) > rhs) probe.worst_excess = std::max(probe.worst_excess, excess);
    }
    ++probe.probes;
  }
  probe.ok = probe.worst_excess <= slack;
  return probe;
}

SubadditivityProbe probe_homogeneity(const CertifiedOperator& op, int probes, std::uint64_t seed, double slack) {
  SubadditivityProbe probe;
  Rng root(seed);
  for (int i = 0; i < probes; ++i) {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    const SampleFunction x = random_input(op.space(), rng, i);
    const double lambda = rng.uniform(-3.0, 3.0);
    const SampleFunction lhs = op(x.scaled(lambda));
    const SampleFunction tx = op(x);
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      const double expect = std::abs(lambda) * std::abs(tx[k]);
      const double err = std::abs(std::abs(lhs[k]) - expect) / std::max(expect, 1e-300);
      if (std::abs(std::abs(lhs[k]) - expect) > 0.0) probe.worst_excess = std::max(probe.worst_excess, err);
    }
    ++probe.probes;
  }
  probe.ok = probe.worst_excess <= slack;
  return probe;
}

}  // namespace orlint
