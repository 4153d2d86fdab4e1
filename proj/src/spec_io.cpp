#include "orlint/spec_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "orlint/error.hpp"
#include "orlint/rng.hpp"

namespace orlint::io {

void require_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!obj.is_object()) throw SpecError(std::string(what) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw SpecError("unknown key '" + item.key() + "' in " + std::string(what));
    }
  }
}

namespace {

double number(const Json& obj, const char* key, std::string_view what) {
  if (!obj.contains(key)) throw SpecError(std::string(what) + " needs '" + key + "'");
  const Json& v = obj.at(key);
  if (!v.is_number()) throw SpecError(std::string(what) + ": '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& obj, const char* key, double fallback, std::string_view what) {
  return obj.contains(key) ? number(obj, key, what) : fallback;
}

std::vector<double> number_list(const Json& obj, const char* key, std::string_view what) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    throw SpecError(std::string(what) + " needs '" + key + "' as an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number()) throw SpecError(std::string(what) + ": '" + key + "' must hold numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string kind_of(const Json& spec, std::string_view what) {
  if (!spec.is_object()) throw SpecError(std::string(what) + " must be a JSON object");
  if (!spec.contains("kind") || !spec.at("kind").is_string()) {
    throw SpecError(std::string(what) + " needs a string 'kind'");
  }
  return spec.at("kind").get<std::string>();
}

// Wraps constructor failures (invalid_argument, domain_error) as SpecError.
template <typename F>
auto as_spec_error(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

double parse_exponent(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string() && value.get<std::string>() == "inf") return kInf;
  throw SpecError("exponent must be a number or \"inf\"");
}

Json exponent_json(double value) { return std::isinf(value) ? Json("inf") : Json(value); }

ExponentCouple parse_couple(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw SpecError("couple must look like p,q");
  auto parse = [](std::string_view s) {
    const std::string str(s);
    if (str == "inf") return kInf;
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (str.empty() || end != str.c_str() + str.size()) throw SpecError("bad exponent '" + str + "'");
    return v;
  };
  const double p = parse(text.substr(0, comma));
  const double q = parse(text.substr(comma + 1));
  return as_spec_error("couple", [&] { return ExponentCouple(p, q); });
}

Json couple_json(const ExponentCouple& couple) {
  return Json::array({exponent_json(couple.p), exponent_json(couple.q)});
}

ExponentCouple couple_from_json(const Json& value) {
  if (!value.is_array() || value.size() != 2) throw SpecError("couple must be [p, q]");
  const double p = parse_exponent(value[0]);
  const double q = parse_exponent(value[1]);
  return as_spec_error("couple", [&] { return ExponentCouple(p, q); });
}

static PiecewiseLinearConcave build_plc_normalized(const Json& spec);
static QuasiConcaveFn build_rho_normalized(const Json& spec);

Json normalize_plc(const Json& spec) {
  require_keys(spec, {"kind", "knots", "values", "slope0", "slope_inf"}, "piecewise linear spec");
  Json out;
  out["kind"] = "plc";
  out["knots"] = number_list(spec, "knots", "piecewise linear spec");
  out["values"] = number_list(spec, "values", "piecewise linear spec");
  out["slope0"] = number(spec, "slope0", "piecewise linear spec");
  out["slope_inf"] = number(spec, "slope_inf", "piecewise linear spec");
  build_plc_normalized(out);
  return out;
}

static PiecewiseLinearConcave build_plc_normalized(const Json& spec) {
  return as_spec_error("piecewise linear spec", [&] {
    return PiecewiseLinearConcave(number_list(spec, "knots", "plc"), number_list(spec, "values", "plc"),
                                  number(spec, "slope0", "plc"), number(spec, "slope_inf", "plc"));
  });
}

Json plc_json(const PiecewiseLinearConcave& f) {
  Json out;
  out["kind"] = "plc";
  out["knots"] = std::vector<double>(f.knots().begin(), f.knots().end());
  out["values"] = std::vector<double>(f.values().begin(), f.values().end());
  out["slope0"] = f.slope0();
  out["slope_inf"] = f.slope_inf();
  return out;
}

Json normalize_rho(const Json& spec) {
  if (!spec.is_object()) throw SpecError("rho spec must be a JSON object");
  std::string kind;
  if (spec.contains("kind")) {
    kind = kind_of(spec, "rho spec");
  } else if (spec.contains("theta")) {
    kind = "power_log";
  } else if (spec.contains("knots")) {
    kind = "plc";
  } else {
    throw SpecError("rho spec needs a 'kind'");
  }
  Json out;
  if (kind == "power_log") {
    require_keys(spec, {"kind", "theta", "a", "b"}, "power_log rho");
    out["kind"] = kind;
    out["theta"] = number(spec, "theta", "power_log rho");
    out["a"] = number_or(spec, "a", 0.0, "power_log rho");
    out["b"] = number_or(spec, "b", 0.0, "power_log rho");
  } else if (kind == "min_one" || kind == "max_one") {
    require_keys(spec, {"kind"}, "rho spec");
    out["kind"] = kind;
  } else if (kind == "plc") {
    out = normalize_plc(spec);
  } else {
    throw SpecError("unknown rho kind '" + kind + "'");
  }
  build_rho_normalized(out);
  return out;
}

static QuasiConcaveFn build_rho_normalized(const Json& spec) {
  const std::string kind = kind_of(spec, "rho spec");
  if (kind == "power_log") {
    return as_spec_error("power_log rho", [&] {
      return power_log_rho(number(spec, "theta", "rho"), number_or(spec, "a", 0.0, "rho"),
                           number_or(spec, "b", 0.0, "rho"));
    });
  }
  if (kind == "min_one") return QuasiConcaveFn::min_one();
  if (kind == "max_one") return QuasiConcaveFn::max_one();
  if (kind == "plc") return QuasiConcaveFn::piecewise_linear(build_plc(spec));
  throw SpecError("unknown rho kind '" + kind + "'");
}

PiecewiseLinearConcave build_plc(const Json& spec) { return build_plc_normalized(normalize_plc(spec)); }
QuasiConcaveFn build_rho(const Json& spec) { return build_rho_normalized(normalize_rho(spec)); }

Json normalize_phi(const Json& spec) {
  const std::string kind = kind_of(spec, "phi spec");
  Json out;
  out["kind"] = kind;
  if (kind == "power") {
    require_keys(spec, {"kind", "p"}, "power phi");
    out["p"] = number(spec, "p", "power phi");
  } else if (kind == "generator") {
    require_keys(spec, {"kind", "p", "q", "rho"}, "generator phi");
    if (!spec.contains("q")) throw SpecError("generator phi needs 'q'");
    if (!spec.contains("rho")) throw SpecError("generator phi needs 'rho'");
    out["p"] = number(spec, "p", "generator phi");
    out["q"] = exponent_json(parse_exponent(spec.at("q")));
    out["rho"] = normalize_rho(spec.at("rho"));
  } else if (kind == "h") {
    require_keys(spec, {"kind", "p", "q", "h"}, "h phi");
    if (!spec.contains("h")) throw SpecError("h phi needs 'h'");
    out["p"] = number(spec, "p", "h phi");
    out["q"] = number(spec, "q", "h phi");
    out["h"] = normalize_plc(spec.at("h"));
  } else if (kind == "tabulated") {
    require_keys(spec, {"kind", "grid", "values"}, "tabulated phi");
    out["grid"] = number_list(spec, "grid", "tabulated phi");
    out["values"] = number_list(spec, "values", "tabulated phi");
  } else {
    throw SpecError("unknown phi kind '" + kind + "'");
  }
  return out;
}

OrliczFunction build_phi(const Json& raw) {
  const Json spec = normalize_phi(raw);
  const std::string kind = kind_of(spec, "phi spec");
  return as_spec_error("phi spec", [&] {
    if (kind == "power") {
      const double p = number(spec, "p", "power phi");
      if (!(p >= 1.0) || !std::isfinite(p)) throw SpecError("power phi needs finite p >= 1");
      return OrliczFunction::power(p);
    }
    if (kind == "generator") {
      const ExponentCouple couple(number(spec, "p", "generator phi"), parse_exponent(spec.at("q")));
      return build_from_generator(couple, build_rho(spec.at("rho")));
    }
    if (kind == "h") {
      const ExponentCouple couple(number(spec, "p", "h phi"), number(spec, "q", "h phi"));
      return build_from_h(couple, build_plc(spec.at("h")));
    }
    if (kind == "tabulated") {
      return OrliczFunction::tabulated(number_list(spec, "grid", "tabulated phi"),
                                       number_list(spec, "values", "tabulated phi"));
    }
    throw SpecError("unknown phi kind '" + kind + "'");
  });
}

Json normalize_operator(const Json& spec) {
  const std::string kind = kind_of(spec, "operator spec");
  Json out;
  out["kind"] = kind;
  if (kind == "identity" || kind == "averaging" || kind == "maximal") {
    require_keys(spec, {"kind"}, "operator spec");
  } else if (kind == "shift") {
    require_keys(spec, {"kind", "scale"}, "shift operator");
    out["scale"] = number_or(spec, "scale", 1.0, "shift operator");
  } else if (kind == "multiplier") {
    require_keys(spec, {"kind", "m"}, "multiplier operator");
    out["m"] = number_list(spec, "m", "multiplier operator");
  } else if (kind == "truncation") {
    require_keys(spec, {"kind", "keep"}, "truncation operator");
    if (spec.contains("keep")) {
      std::vector<long long> keep;
      for (const auto& v : spec.at("keep")) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
          throw SpecError("truncation 'keep' must list atom indices");
        }
        keep.push_back(v.get<long long>());
      }
      out["keep"] = keep;
    }
  } else if (kind == "matrix") {
    require_keys(spec, {"kind", "rows"}, "matrix operator");
    if (!spec.contains("rows") || !spec.at("rows").is_array()) throw SpecError("matrix operator needs 'rows'");
    Json rows = Json::array();
    for (const auto& row : spec.at("rows")) {
      Json wrapped;
      wrapped["r"] = row;
      rows.push_back(number_list(wrapped, "r", "matrix row"));
    }
    out["rows"] = rows;
  } else if (kind == "random_contraction") {
    require_keys(spec, {"kind", "seed", "terms"}, "random_contraction operator");
    if (!spec.contains("seed") || !is_seed(spec.at("seed"))) {
      throw SpecError("random_contraction needs an unsigned integer 'seed'");
    }
    out["seed"] = spec.at("seed").get<std::uint64_t>();
    out["terms"] = spec.value("terms", 3);
    if (out["terms"].get<int>() < 1) throw SpecError("random_contraction needs terms >= 1");
  } else if (kind == "max_of") {
    require_keys(spec, {"kind", "ops"}, "max_of operator");
    if (!spec.contains("ops") || !spec.at("ops").is_array() || spec.at("ops").empty()) {
      throw SpecError("max_of needs a non-empty 'ops' array");
    }
    Json ops = Json::array();
    for (const auto& op : spec.at("ops")) ops.push_back(normalize_operator(op));
    out["ops"] = ops;
  } else {
    throw SpecError("unknown operator kind '" + kind + "'");
  }
  return out;
}

namespace {

Matrix random_contraction_matrix(std::size_t n, std::uint64_t seed, int terms) {
  Rng rng(seed);
  std::vector<double> weights(static_cast<std::size_t>(terms));
  for (auto& w : weights) w = rng.uniform(0.05, 1.0);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  Matrix a(n, std::vector<double>(n, 0.0));
  for (int k = 0; k < terms; ++k) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const double w = weights[static_cast<std::size_t>(k)] / total * (1.0 - 1e-14);
    for (std::size_t i = 0; i < n; ++i) a[i][perm[i]] += rng.sign() * w;
  }
  return a;
}

}  // namespace

CertifiedOperator build_operator(const Json& raw, const SpacePtr& space) {
  const Json spec = normalize_operator(raw);
  const std::string kind = kind_of(spec, "operator spec");
  const std::size_t n = space->size();
  return as_spec_error("operator '" + kind + "'", [&]() -> CertifiedOperator {
    if (kind == "identity") return identity_operator(space);
    if (kind == "averaging") return averaging_operator(space);
    if (kind == "maximal") return discrete_maximal(space);
    if (kind == "shift") return shift_operator(space, number_or(spec, "scale", 1.0, "shift"));
    if (kind == "multiplier") return multiplier(space, number_list(spec, "m", "multiplier"));
    if (kind == "truncation") {
      std::vector<double> m(n, 0.0);
      if (spec.contains("keep")) {
        for (const auto& v : spec.at("keep")) {
          const auto i = v.get<std::size_t>();
          if (i >= n) throw SpecError("truncation index out of range");
          m[i] = 1.0;
        }
      } else {
        for (std::size_t i = 0; i < n; i += 2) m[i] = 1.0;
      }
      return multiplier(space, m, "truncation");
    }
    if (kind == "matrix") {
      Matrix a;
      for (const auto& row : spec.at("rows")) a.push_back(row.get<std::vector<double>>());
      return contractive_matrix(space, a);
    }
    if (kind == "random_contraction") {
      return contractive_matrix(
          space, random_contraction_matrix(n, spec.at("seed").get<std::uint64_t>(), spec.value("terms", 3)),
          "random_contraction");
    }
    if (kind == "max_of") {
      std::vector<CertifiedOperator> ops;
      for (const auto& op : spec.at("ops")) ops.push_back(build_operator(op, space));
      return max_of(ops);
    }
    throw SpecError("unknown operator kind '" + kind + "'");
  });
}

bool is_seed(const Json& value) {
  return value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0);
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path);
}

double round_number(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.13g", x);
  return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.13g", x);
  return buf;
}

Json number_json(double x) {
  if (std::isfinite(x)) return round_number(x);
  return format_number(x);
}

}  // namespace orlint::io
