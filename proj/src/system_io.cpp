#include "hopfkit/system_io.hpp"

#include <fstream>
#include <sstream>

#include "hopfkit/errors.hpp"

namespace hopfkit {

using nlohmann::json;

namespace {

std::optional<PowerTerm> power_term(const json& entry, const char* name) {
  if (!entry.contains(name)) return std::nullopt;
  const json& p = entry.at(name);
  return PowerTerm{p.at("beta").get<double>(), p.at("c").get<double>()};
}

json power_json(const PowerTerm& p) { return {{"beta", p.beta}, {"c", p.c}}; }

// Converts a byte offset into 1-based line and column.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ParamField field_from_json(const json& j, Window window) {
  try {
    const int degree = j.at("degree").get<int>();
    const double a_star = j.value("a_star", 0.0);
    std::map<CoeffKey, ParamCurve> coeffs;
    for (const json& e : j.at("coefficients")) {
      CoeffKey key{e.at("m").get<int>(), e.at("k").get<int>(), e.at("l").get<int>()};
      std::map<int, double> poly;
      if (e.contains("poly")) {
        for (const auto& [power, value] : e.at("poly").items()) {
          std::size_t used = 0;
          const int p = std::stoi(power, &used);
          if (used != power.size()) throw InputError("bad power key '" + power + "'");
          poly[p] = value.get<double>();
        }
      }
      if (coeffs.count(key))
        throw InputError("duplicate coefficient m=" + std::to_string(key.m) +
                         " k=" + std::to_string(key.k) + " l=" + std::to_string(key.l));
      coeffs.emplace(key, ParamCurve(std::move(poly), power_term(e, "signed_power"),
                                     power_term(e, "abs_power")));
    }
    return ParamField(degree, std::move(coeffs), a_star, window);
  } catch (const json::exception& ex) {
    throw InputError(std::string("invalid system description: ") + ex.what());
  } catch (const std::invalid_argument&) {
    throw InputError("invalid power key in system description");
  }
}

json field_to_json(const ParamField& vf) {
  json coeffs = json::array();
  for (const auto& [key, curve] : vf.coeffs()) {
    json e{{"m", key.m}, {"k", key.k}, {"l", key.l}};
    json poly = json::object();
    for (const auto& [p, c] : curve.poly()) poly[std::to_string(p)] = c;
    e["poly"] = poly;
    if (curve.signed_power()) e["signed_power"] = power_json(*curve.signed_power());
    if (curve.abs_power()) e["abs_power"] = power_json(*curve.abs_power());
    coeffs.push_back(std::move(e));
  }
  return {{"degree", vf.degree()}, {"a_star", vf.a_star()}, {"coefficients", coeffs}};
}

ParamField parse_system(const std::string& text, Window window) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    const auto [line, col] = line_col(text, ex.byte == 0 ? 0 : ex.byte - 1);
    throw InputError("malformed JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(col));
  }
  return field_from_json(j, window);
}

ParamField load_system(const std::string& path, Window window) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open system file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str(), window);
}

}  // namespace hopfkit
