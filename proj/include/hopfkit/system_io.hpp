#pragma once

#include <string>

#include <json.hpp>

#include "hopfkit/field.hpp"

namespace hopfkit {

/// System description file:
///   {"degree": int, "a_star": float,
///    "coefficients": [{"m": 1|2, "k": int, "l": int,
///                      "poly": {"<power>": float, ...},
///                      "signed_power": {"beta": float, "c": float}?,
///                      "abs_power": {"beta": float, "c": float}?}, ...]}
ParamField field_from_json(const nlohmann::json& j, Window window = {});
nlohmann::json field_to_json(const ParamField& vf);

/// Parses a system file; malformed JSON raises InputError naming line and column.
ParamField load_system(const std::string& path, Window window = {});
ParamField parse_system(const std::string& text, Window window = {});

}  // namespace hopfkit
