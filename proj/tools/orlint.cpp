// orlint: constants tables, K-functionals, majorants, norms and scenario
// verification from the command line.
//
// Exit codes: 0 success or pass, 1 verification failure, 2 usage, config or
// rejected scenario.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "orlint/constants.hpp"
#include "orlint/error.hpp"
#include "orlint/kfunc.hpp"
#include "orlint/measure.hpp"
#include "orlint/numeric.hpp"
#include "orlint/orlicz.hpp"
#include "orlint/quasiconcave.hpp"
#include "orlint/spec_io.hpp"
#include "orlint/verify.hpp"

using namespace orlint;
using io::Json;
using io::format_number;

namespace {

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
};

Grid parse_grid(const std::string& text, const char* flag) {
  Grid g;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start, &g.stop, &g.points, &tail) != 3 || g.points < 1 ||
      g.stop < g.start) {
    throw SpecError(std::string(flag) + " must look like start:stop:points with start <= stop");
  }
  return g;
}

void emit_table(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows,
                const std::vector<std::vector<std::string>>& text_columns, const std::string& format) {
  if (format == "json") {
    Json out = Json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Json row;
      for (std::size_t c = 0; c < rows[r].size(); ++c) row[columns[c]] = io::number_json(rows[r][c]);
      for (std::size_t c = 0; c < text_columns[r].size(); ++c) {
        row[columns[rows[r].size() + c]] = text_columns[r][c];
      }
      out.push_back(row);
    }
    std::cout << out.dump(2) << "\n";
    return;
  }
  for (std::size_t c = 0; c < columns.size(); ++c) std::cout << (c ? "," : "") << columns[c];
  std::cout << "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t c = 0;
    for (double v : rows[r]) std::cout << (c++ ? "," : "") << format_number(v);
    for (const auto& s : text_columns[r]) std::cout << (c++ ? "," : "") << s;
    std::cout << "\n";
  }
}

double or_nan(double (*f)(double, double), double p, double q) {
  try {
    return f(p, q);
  } catch (const std::exception&) {
    return std::nan("");
  }
}

int run_gamma(const std::string& p_text, const std::string& q_text, const std::string& method,
              const std::string& format) {
  const Grid pg = parse_grid(p_text, "--p-grid");
  const Grid qg = parse_grid(q_text, "--q-grid");
  const double limit = method == "fast" ? 64.0 : 16.0;
  if (pg.start < 1.0 || qg.start < 1.0 || pg.stop > limit || qg.stop > limit) {
    throw SpecError("exponents must lie in [1, " + format_number(limit) + "] for method " + method);
  }
  std::vector<std::string> columns{"p", "q", "gamma"};
  if (method == "both") columns.push_back("gamma_oracle");
  for (const char* c : {"lower_bound", "upper_bound", "c_subadditive", "c_concave_h", "c_linear"}) {
    columns.emplace_back(c);
  }
  std::vector<std::vector<double>> rows;
  for (double p : numeric::linear_grid(pg.start, pg.stop, static_cast<std::size_t>(pg.points))) {
    for (double q : numeric::linear_grid(qg.start, qg.stop, static_cast<std::size_t>(qg.points))) {
      std::vector<double> row{p, q};
      if (method == "oracle") {
        row.push_back(sparr_gamma_oracle(p, q).value);
      } else {
        row.push_back(sparr_gamma(p, q).value);
        if (method == "both") row.push_back(sparr_gamma_oracle(p, q).value);
      }
      const double lo = std::min(p, q);
      const double hi = std::max(p, q);
      row.push_back(std::pow(2.0, 1.0 - 1.0 / lo));
      row.push_back(std::pow(2.0, 1.0 - 1.0 / hi));
      const bool ordered = p < q;
      row.push_back(ordered ? or_nan(interp_constant_subadditive, p, q) : std::nan(""));
      row.push_back(ordered ? or_nan(interp_constant_concave_h, p, q) : std::nan(""));
      row.push_back(ordered ? or_nan(interp_constant_linear, p, q) : std::nan(""));
      rows.push_back(std::move(row));
    }
  }
  emit_table(columns, rows, std::vector<std::vector<std::string>>(rows.size()), format);
  return 0;
}

// Grid minimum over truncation levels; the check on k_lp_linf.
double k_lp_linf_grid(double t, const SampleFunction& x, double p, int n) {
  const double top = sup_norm(x);
  double best = kInf;
  for (int j = 0; j < n; ++j) {
    const double lambda = top * j / (n - 1);
    std::vector<double> rest(x.size());
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = std::max(std::abs(x[i]) - lambda, 0.0);
    best = std::min(best, lp_norm(x.with_values(std::move(rest)), p) + t * lambda);
  }
  return best;
}

int run_kfunc(const std::string& input, const std::string& couple_text, const std::string& grid_text,
              const std::string& method, int grid_n, const std::string& format) {
  const SampleFunction x = read_function_csv_file(input);
  const ExponentCouple couple = io::parse_couple(couple_text);
  const Grid g = parse_grid(grid_text, "--t-grid");
  if (!(g.start > 0.0)) throw SpecError("--t-grid needs start > 0");
  if (method == "oracle" && !couple.q_infinite() && (x.size() > 3 || grid_n < 2 || grid_n > 201)) {
    throw SpecError("the oracle handles at most 3 atoms with --grid-n in [2, 201]");
  }
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::string>> text;
  for (double t : numeric::log_grid(g.start, g.stop, static_cast<std::size_t>(g.points))) {
    double value = 0.0;
    std::string label;
    if (method == "fast") {
      const KEvaluation k = couple.q_infinite() ? k_lp_linf(t, x, couple.p) : l_functional(t, x, couple);
      value = k.value;
      label = to_string(k.method);
    } else {
      value = couple.q_infinite() ? k_lp_linf_grid(t, x, couple.p, 100 * grid_n)
                                  : brute_force_k(t, x, couple, grid_n);
      label = to_string(KMethod::BruteForce);
    }
    rows.push_back({t, value});
    text.push_back({label});
  }
  emit_table({"t", "value", "method"}, rows, text, format);
  return 0;
}

int run_majorant(const std::string& rho_text, const std::string& grid_text, const std::string& format) {
  const QuasiConcaveFn rho = io::build_rho(io::normalize_rho(io::parse_json(rho_text, "--rho")));
  const Grid g = parse_grid(grid_text, "--t-grid");
  if (!(g.start > 0.0)) throw SpecError("--t-grid needs start > 0");
  const auto shape = is_quasiconcave(rho.evaluator(), default_check_grid());
  if (!shape.ok) {
    throw SpecError("rho is not quasi-concave near t = " + format_number(shape.worst_at));
  }
  const PiecewiseLinearConcave tilde = concave_majorant(rho.evaluator(), default_majorant_grid());
  std::vector<std::vector<double>> rows;
  for (double t : numeric::log_grid(g.start, g.stop, static_cast<std::size_t>(g.points))) {
    const double r = rho(t);
    const double m = tilde(t);
    rows.push_back({t, r, m, m / r});
  }
  emit_table({"t", "rho", "majorant", "ratio"}, rows, std::vector<std::vector<std::string>>(rows.size()), format);
  return 0;
}

int run_norms(const std::string& input, const std::string& phi_text, const std::string& format) {
  const SampleFunction x = read_function_csv_file(input);
  const OrliczFunction phi = io::build_phi(io::normalize_phi(io::parse_json(phi_text, "--phi")));
  const std::vector<double> row{modular_or_inf(phi, x), luxemburg_norm(phi, x), amemiya_norm(phi, x)};
  emit_table({"modular", "luxemburg", "amemiya"}, {row}, {{}}, format);
  return 0;
}

int run_verify(const std::string& path, const std::string& out_path, int jobs, bool refine,
               std::optional<std::uint64_t> seed, bool timing) {
  Scenario scenario = Scenario::from_json(io::read_json_file(path));
  if (seed) scenario.inputs.seed = *seed;
  if (refine) scenario = scenario.refined();
  const VerificationReport report = run_scenario(scenario, RunOptions{jobs});
  const std::string text = report.to_json(timing).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw SpecError("cannot write '" + out_path + "'");
    out << text;
    std::cout << to_string(report.status) << ": " << report.trials << " trials, " << report.violation_count
              << " violations, worst margin " << format_number(report.worst_margin) << "\n";
  }
  if (report.status == Status::Rejected) {
    std::cerr << "orlint: scenario rejected: " << report.reason << "\n";
    return 2;
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz-space interpolation toolkit"};
  app.require_subcommand(1);

  std::string format = "csv";
  auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* gamma = app.add_subcommand("gamma", "Sparr constants and interpolation constants");
  std::string p_grid = "1:4:7";
  std::string q_grid = "1:4:7";
  std::string gamma_method = "fast";
  gamma->add_option("--p-grid", p_grid, "start:stop:points, linear");
  gamma->add_option("--q-grid", q_grid, "start:stop:points, linear");
  gamma->add_option("--method", gamma_method)->check(CLI::IsMember({"fast", "oracle", "both"}));
  add_format(gamma);

  auto* kfunc = app.add_subcommand("kfunc", "K-functional of a function file");
  std::string input;
  std::string couple = "1,2";
  std::string t_grid = "1e-3:1e3:13";
  std::string k_method = "fast";
  int grid_n = 201;
  kfunc->add_option("--input", input, "CSV with header weight,value")->required();
  kfunc->add_option("--couple", couple, "p,q with q possibly inf");
  kfunc->add_option("--t-grid", t_grid, "start:stop:points, log-spaced");
  kfunc->add_option("--method", k_method)->check(CLI::IsMember({"fast", "oracle"}));
  kfunc->add_option("--grid-n", grid_n, "Oracle grid points per atom");
  add_format(kfunc);

  auto* majorant = app.add_subcommand("majorant", "Concave majorant of a quasi-concave rho");
  std::string rho;
  std::string m_grid = "1e-4:1e4:17";
  majorant->add_option("--rho", rho, "rho spec as JSON")->required();
  majorant->add_option("--t-grid", m_grid, "start:stop:points, log-spaced");
  add_format(majorant);

  auto* norms = app.add_subcommand("norms", "Modular, Luxemburg and Amemiya norms of a function file");
  std::string phi;
  norms->add_option("--input", input, "CSV with header weight,value")->required();
  norms->add_option("--phi", phi, "phi spec as JSON")->required();
  add_format(norms);

  auto* verify = app.add_subcommand("verify", "Run a verification scenario");
  std::string scenario;
  std::string out;
  int jobs = 1;
  bool refine = false;
  bool no_timing = false;
  std::optional<std::uint64_t> seed;
  verify->add_option("--scenario", scenario, "Scenario JSON file")->required();
  verify->add_option("--out", out, "Write the report here instead of stdout");
  verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));
  verify->add_flag("--refine", refine, "Double the t-grid points and the input count");
  verify->add_option("--seed", seed, "Override the scenario seed");
  verify->add_flag("--no-timing", no_timing, "Omit wall_ms so reruns are byte-identical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gamma) return run_gamma(p_grid, q_grid, gamma_method, format);
    if (*kfunc) return run_kfunc(input, couple, t_grid, k_method, grid_n, format);
    if (*majorant) return run_majorant(rho, m_grid, format);
    if (*norms) return run_norms(input, phi, format);
    if (*verify) return run_verify(scenario, out, jobs, refine, seed, !no_timing);
  } catch (const SpecError& e) {
    std::cerr << "orlint: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "orlint: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "orlint: error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
