#include "hopfkit/atlas.hpp"

#include "hopfkit/errors.hpp"

namespace hopfkit {

namespace {

// Builds X' = [[L, -1], [1, L]] X + c2 (x^2+y^2) X + c4 (x^2+y^2)^2 X.
//
// Coefficient tables generated for each component (m = 1 multiplies x, m = 2 y):
//   c2 r^2 X   : s^1_30 = s^1_12 = c2;  s^2_21 = s^2_03 = c2
//   c4 r^4 X   : s^1_50 = c4, s^1_32 = 2 c4, s^1_14 = c4;
//                s^2_41 = c4, s^2_23 = 2 c4, s^2_05 = c4
ParamField radial_system(const ParamCurve& L, const ParamCurve& c2,
                         const std::optional<ParamCurve>& c4) {
  std::map<CoeffKey, ParamCurve> coeffs;
  coeffs[{1, 1, 0}] = L;
  coeffs[{1, 0, 1}] = ParamCurve::constant(-1.0);
  coeffs[{2, 1, 0}] = ParamCurve::constant(1.0);
  coeffs[{2, 0, 1}] = L;

  coeffs[{1, 3, 0}] = c2;
  coeffs[{1, 1, 2}] = c2;
  coeffs[{2, 2, 1}] = c2;
  coeffs[{2, 0, 3}] = c2;
  int degree = 3;

  if (c4) {
    const auto scaled = [&](double s) {
      std::map<int, double> p;
      for (const auto& [k, v] : c4->poly()) p[k] = s * v;
      return ParamCurve(p);
    };
    coeffs[{1, 5, 0}] = scaled(1.0);
    coeffs[{1, 3, 2}] = scaled(2.0);
    coeffs[{1, 1, 4}] = scaled(1.0);
    coeffs[{2, 4, 1}] = scaled(1.0);
    coeffs[{2, 2, 3}] = scaled(2.0);
    coeffs[{2, 0, 5}] = scaled(1.0);
    degree = 5;
  }
  return ParamField(degree, std::move(coeffs));
}

ParamCurve mono(int power, double c) { return ParamCurve({{power, c}}); }

std::vector<AtlasEntry> make_atlas() {
  std::vector<AtlasEntry> a;
  a.push_back({"multi2",
               [](double) { return radial_system(mono(3, 1.0), mono(2, -1.0), mono(1, 3.0 / 16.0)); },
               "Two emerging cycles, degenerate of second kind (N=1, gamma=2/3): "
               "r' = a r (a^2 - a r^2 + 3/16 r^4), theta' = 1; cycles r1 = 2/sqrt(3) a^(1/2) "
               "(stable), r2 = 2 a^(1/2) (unstable) for a > 0; tau = 2a^3"});
  a.push_back({"semistable2",
               [](double) { return radial_system(mono(3, 1.0), mono(2, -2.0), mono(1, 1.0)); },
               "Single semistable emerging cycle, degenerate of second kind: "
               "r' = a r (r^2 - a)^2, theta' = 1; cycle r = a^(1/2) for a > 0; tau = 2a^3"});
  a.push_back({"persist1",
               [](double) { return radial_system(mono(1, 1.0), mono(1, -1.0), std::nullopt); },
               "Degenerate of first kind with a persistent cycle: r' = a r (1 - r^2), "
               "theta' = 1; cycle r = 1 for every a != 0; tau = 2a"});
  a.push_back({"persist-semi",
               [](double) { return radial_system(mono(1, 1.0), mono(1, -2.0), mono(1, 1.0)); },
               "Degenerate of first kind with a persistent semistable cycle: "
               "r' = a r (1 - r^2)^2, theta' = 1; cycle r = 1 for every a != 0; tau = 2a"});
  a.push_back({"infinity",
               [](double beta) {
                 return radial_system(mono(1, 1.0),
                                      ParamCurve({}, std::nullopt, PowerTerm{beta + 1.0, -1.0}),
                                      std::nullopt);
               },
               "Degenerate of first kind with a cycle coming from infinity: "
               "x' = a x - y - a sign(a)|a|^beta r^2 x (same in y), i.e. "
               "r' = a r (1 - sign(a)|a|^beta r^2), theta' = 1; cycle r = a^(-beta/2) for a > 0; "
               "tau = 2a"});
  a.push_back({"cubic-std",
               [](double) { return radial_system(mono(1, 1.0), ParamCurve::constant(-1.0), std::nullopt); },
               "Reference non-degenerate Hopf system (not one of the degenerate examples): "
               "r' = r (a - r^2), theta' = 1; cycle r = a^(1/2) for a > 0; tau = 2a"});
  return a;
}

}  // namespace

const std::vector<AtlasEntry>& atlas() {
  static const std::vector<AtlasEntry> entries = make_atlas();
  return entries;
}

ParamField atlas_system(const std::string& name, double beta) {
  for (const AtlasEntry& e : atlas())
    if (e.name == name) return e.builder(beta);
  throw InputError("unknown atlas system '" + name + "'");
}

}  // namespace hopfkit
