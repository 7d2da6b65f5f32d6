#include "hopfkit/field.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "hopfkit/errors.hpp"

namespace hopfkit {

namespace {

double sign(double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); }

void check_power(const std::optional<PowerTerm>& p, const char* what) {
  if (p && !(p->beta > 0.0 && std::isfinite(p->beta) && std::isfinite(p->c)))
    throw InputError(std::string(what) + " requires beta > 0 and finite c");
}

}  // namespace

ParamCurve::ParamCurve(std::map<int, double> poly, std::optional<PowerTerm> signed_power,
                       std::optional<PowerTerm> abs_power)
    : poly_(std::move(poly)), signed_(signed_power), abs_(abs_power) {
  for (const auto& [power, c] : poly_) {
    if (power < 0) throw InputError("negative power of a in parameter curve");
    if (!std::isfinite(c)) throw InputError("non-finite polynomial coefficient");
  }
  if (signed_ && abs_)
    throw InputError("at most one non-polynomial term per parameter curve");
  check_power(signed_, "signed_power");
  check_power(abs_, "abs_power");
}

double ParamCurve::operator()(double a) const {
  double v = 0.0;
  for (const auto& [power, c] : poly_) v += c * std::pow(a, power);
  if (signed_) v += signed_->c * sign(a) * std::pow(std::abs(a), signed_->beta);
  if (abs_) v += abs_->c * std::pow(std::abs(a), abs_->beta);
  return v;
}

ParamField::ParamField(int degree, std::map<CoeffKey, ParamCurve> coeffs, double a_star,
                       Window window)
    : degree_(degree), coeffs_(std::move(coeffs)), a_star_(a_star), window_(window) {
  if (degree_ < 1 || degree_ > kMaxDegree)
    throw InputError("degree must be in [1, 6], got " + std::to_string(degree_));
  if (!(window_.lo < window_.hi)) throw InputError("parameter window must satisfy lo < hi");
  for (const auto& [key, curve] : coeffs_) {
    if (key.m != 1 && key.m != 2) throw InputError("component index m must be 1 or 2");
    if (key.k < 0 || key.l < 0) throw InputError("negative monomial exponent");
    if (key.k + key.l == 0)
      throw InputError("constant terms are not allowed: the origin must be an equilibrium");
    if (key.k + key.l > degree_)
      throw InputError("monomial degree exceeds declared degree " + std::to_string(degree_));
  }
}

ParamField ParamField::with_window(Window w) const {
  return ParamField(degree_, coeffs_, a_star_, w);
}

double ParamField::coefficient(const CoeffKey& key, double a) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? 0.0 : it->second(a);
}

PlanarPolynomial ParamField::at(double a) const {
  Poly2 p1, p2;
  for (const auto& [key, curve] : coeffs_) (key.m == 1 ? p1 : p2)(key.k, key.l) += curve(a);
  return {p1, p2};
}

Vec2 eval_field(const ParamField& vf, double a, Vec2 point) { return vf.at(a)(point); }

JacobianSummary jacobian_summary(const Mat2& J) {
  JacobianSummary s;
  s.tau = J.trace();
  s.delta = J.det();
  s.hopf_ok = s.tau * s.tau - 4.0 * s.delta < 0.0;
  if (s.hopf_ok) s.lambda = std::sqrt(4.0 * s.delta - s.tau * s.tau);
  return s;
}

JacobianSummary jacobian_summary(const ParamField& vf, double a) {
  const Mat2 J{vf.coefficient({1, 1, 0}, a), vf.coefficient({1, 0, 1}, a),
               vf.coefficient({2, 1, 0}, a), vf.coefficient({2, 0, 1}, a)};
  return jacobian_summary(J);
}

double a_of_tau(const ParamField& vf, double tau_target) {
  const auto tau = [&](double a) { return jacobian_summary(vf, a).tau; };
  const Window w = vf.window();

  constexpr int kSamples = 101;
  std::vector<double> as(kSamples), ts(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    as[i] = w.lo + (w.hi - w.lo) * i / (kSamples - 1);
    ts[i] = tau(as[i]);
  }
  const bool increasing = ts.back() > ts.front();
  for (int i = 1; i < kSamples; ++i) {
    if (increasing ? !(ts[i] > ts[i - 1]) : !(ts[i] < ts[i - 1]))
      throw NonMonotoneTrace("tau(a) is not strictly monotone near a = " +
                             std::to_string(as[i]));
  }

  double lo = w.lo, hi = w.hi;
  double tlo = ts.front(), thi = ts.back();
  if (!increasing) {
    std::swap(lo, hi);
    std::swap(tlo, thi);
  }
  if (tau_target < tlo || tau_target > thi)
    throw OutOfWindow("tau = " + std::to_string(tau_target) + " is not attained on [" +
                      std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]");
  if (tau_target == tlo) return lo;
  if (tau_target == thi) return hi;

  // Bisection to full double precision; tau(lo) < target < tau(hi).
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double tm = tau(mid);
    if (tm == tau_target) return mid;
    (tm < tau_target ? lo : hi) = mid;
  }
  return std::abs(tau(lo) - tau_target) <= std::abs(tau(hi) - tau_target) ? lo : hi;
}

CoeffTable nonlinear_part(const ParamField& vf, double a) {
  CoeffTable out;
  for (const auto& [key, curve] : vf.coeffs()) {
    if (key.k + key.l < 2) continue;
    const double v = curve(a);
    if (v != 0.0) out[key] = v;
  }
  return out;
}

}  // namespace hopfkit
