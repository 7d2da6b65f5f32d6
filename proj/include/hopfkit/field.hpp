#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "hopfkit/planar.hpp"

namespace hopfkit {

/// Non-polynomial term c * |a|^beta, optionally multiplied by sign(a).
struct PowerTerm {
  double beta = 1.0;
  double c = 0.0;
};

/// A coefficient as a function of the parameter a:
///   sum_j poly[j] a^j  +  c sign(a)|a|^beta  (signed_power)
///                      +  c |a|^beta         (abs_power)
/// At most one of the two power terms may be present.
class ParamCurve {
 public:
  ParamCurve() = default;
  explicit ParamCurve(std::map<int, double> poly,
                      std::optional<PowerTerm> signed_power = std::nullopt,
                      std::optional<PowerTerm> abs_power = std::nullopt);

  static ParamCurve constant(double c) { return ParamCurve({{0, c}}); }

  double operator()(double a) const;

  const std::map<int, double>& poly() const { return poly_; }
  const std::optional<PowerTerm>& signed_power() const { return signed_; }
  const std::optional<PowerTerm>& abs_power() const { return abs_; }

 private:
  std::map<int, double> poly_;
  std::optional<PowerTerm> signed_;
  std::optional<PowerTerm> abs_;
};

/// Key of a coefficient sigma^m_{kl}: component m in {1,2}, monomial x^k y^l.
struct CoeffKey {
  int m, k, l;
  friend auto operator<=>(const CoeffKey&, const CoeffKey&) = default;
};

using CoeffTable = std::map<CoeffKey, double>;

struct Window {
  double lo = -0.5;
  double hi = 0.5;
};

/// One-parameter family of polynomial planar vector fields with an
/// equilibrium at the origin for every parameter value.
class ParamField {
 public:
  ParamField(int degree, std::map<CoeffKey, ParamCurve> coeffs, double a_star = 0.0,
             Window window = {});

  int degree() const { return degree_; }
  double a_star() const { return a_star_; }
  const Window& window() const { return window_; }
  const std::map<CoeffKey, ParamCurve>& coeffs() const { return coeffs_; }

  ParamField with_window(Window w) const;

  /// Coefficients frozen at parameter value a.
  PlanarPolynomial at(double a) const;
  double coefficient(const CoeffKey& key, double a) const;

 private:
  int degree_;
  std::map<CoeffKey, ParamCurve> coeffs_;
  double a_star_;
  Window window_;
};

struct JacobianSummary {
  double tau = 0.0;
  double delta = 0.0;
  std::optional<double> lambda;  // set only when hopf_ok
  bool hopf_ok = false;
};

Vec2 eval_field(const ParamField& vf, double a, Vec2 point);

JacobianSummary jacobian_summary(const Mat2& J);
JacobianSummary jacobian_summary(const ParamField& vf, double a);

/// Inverts a -> tau_a on the field's window. Requires tau_a to be strictly
/// monotone on a 101-point sample of the window.
double a_of_tau(const ParamField& vf, double tau_target);

/// Every nonzero sigma^m_{kl}(a) with k + l >= 2.
CoeffTable nonlinear_part(const ParamField& vf, double a);

}  // namespace hopfkit
