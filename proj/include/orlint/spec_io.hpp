#pragma once

// JSON specs for rho, h, phi and operators, and number formatting shared by
// the reports and the CLI. Parsing rejects unknown keys; normalize_* returns
// the canonical tagged form that the build_* functions consume.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "orlint/measure.hpp"
#include "orlint/operators.hpp"
#include "orlint/orlicz.hpp"
#include "orlint/quasiconcave.hpp"

namespace orlint::io {

using Json = nlohmann::ordered_json;

/// Throws SpecError when obj has a key outside `allowed`.
void require_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view what);

/// A number, or the string "inf".
double parse_exponent(const Json& value);
Json exponent_json(double value);

/// "p,q" with q possibly "inf".
ExponentCouple parse_couple(std::string_view text);
Json couple_json(const ExponentCouple& couple);
ExponentCouple couple_from_json(const Json& value);

Json normalize_plc(const Json& spec);
PiecewiseLinearConcave build_plc(const Json& spec);
Json plc_json(const PiecewiseLinearConcave& f);

/// power_log (tagged, or untagged {"theta","a","b"}), min_one, max_one, plc
/// (tagged, or untagged {"knots",...}).
Json normalize_rho(const Json& spec);
QuasiConcaveFn build_rho(const Json& spec);

/// power, generator, h, tabulated.
Json normalize_phi(const Json& spec);
OrliczFunction build_phi(const Json& spec);

/// identity, averaging, shift, multiplier, truncation, matrix,
/// random_contraction, max_of, maximal.
Json normalize_operator(const Json& spec);
CertifiedOperator build_operator(const Json& spec, const SpacePtr& space);

/// A nonnegative integer usable as a 64-bit seed.
bool is_seed(const Json& value);

/// Parses JSON text, mapping syntax errors to SpecError.
Json parse_json(std::string_view text, std::string_view what);
Json read_json_file(const std::string& path);

/// x rounded to 13 significant digits.
double round_number(double x);
/// %.13g, with "inf", "-inf" and "nan" spelled out.
std::string format_number(double x);
/// round_number as a JSON number, or the strings "inf"/"-inf"/"nan".
Json number_json(double x);

}  // namespace orlint::io
