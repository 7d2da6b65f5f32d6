#include "hopfkit/canonical.hpp"

#include <cmath>
#include <complex>

#include "hopfkit/errors.hpp"

namespace hopfkit {

namespace {

// Columns (Re v, -Im v) of the eigenvector v for lambda = tau/2 + i omega,
// normalized by a unit first component (unit second component when the
// first vanishes), then scaled so the second column has unit length.
Mat2 rotation_basis(const Mat2& J, double omega) {
  const std::complex<double> lam(0.5 * J.trace(), omega);
  std::complex<double> v1, v2;
  if (J.a12 != 0.0) {
    v1 = 1.0;
    v2 = (lam - J.a11) / J.a12;
  } else {
    v2 = 1.0;
    v1 = (lam - J.a22) / J.a21;
  }
  Mat2 M{v1.real(), -v1.imag(), v2.real(), -v2.imag()};
  const double s = std::hypot(M.a12, M.a22);
  return (1.0 / s) * M;
}

ParamField frozen_field(const PlanarPolynomial& f, int degree, double a_star) {
  std::map<CoeffKey, ParamCurve> coeffs;
  for (int m = 1; m <= 2; ++m)
    for (int k = 0; k <= kMaxDegree; ++k)
      for (int l = 0; k + l <= kMaxDegree; ++l) {
        const double c = f.component(m)(k, l);
        if (c != 0.0 && k + l >= 1) coeffs[{m, k, l}] = ParamCurve::constant(c);
      }
  return ParamField(degree, std::move(coeffs), a_star);
}

}  // namespace

CanonicalSystem canonicalize(const ParamField& vf, double a) {
  const PlanarPolynomial f = vf.at(a);
  const Mat2 J = f.jacobian();
  const JacobianSummary js = jacobian_summary(J);
  if (!js.hopf_ok)
    throw NotHopfRegion("linearization at a = " + std::to_string(a) +
                        " has real eigenvalues (tau^2 - 4 delta >= 0)");

  const JacobianSummary crit = jacobian_summary(vf, vf.a_star());
  if (!crit.hopf_ok)
    throw NotHopfRegion("linearization at a_star has real eigenvalues");

  const Mat2 M = rotation_basis(J, 0.5 * *js.lambda);
  const double scale = 2.0 / *crit.lambda;
  PlanarPolynomial field = f.transformed(M, scale);
  ParamField vf_c = frozen_field(field, vf.degree(), vf.a_star());
  CanonicalSystem cs{a,         std::move(vf_c),       std::move(field), M,
                     scale,     scale * js.tau,        scale * *js.lambda};
  return cs;
}

std::pair<Mat2, Mat2> gamma1(const CanonicalSystem& cs) {
  const Mat2 J = cs.field.jacobian();
  const Mat2 gamma{1.0, 0.0, J.a11, J.a12};
  return {gamma, gamma.inverse()};
}

Table2 r_coefficients(const CanonicalSystem& cs, const Mat2& gamma) {
  Table2 r;
  const Poly2& s1 = cs.field.component(1);
  const Poly2& s2 = cs.field.component(2);
  for (int k = 0; k <= kMaxDegree; ++k)
    for (int l = 0; k + l <= kMaxDegree; ++l) {
      if (k + l < 2) continue;
      r[{k, l}] = gamma.a21 * s1(k, l) + gamma.a22 * s2(k, l);
    }
  return r;
}

Table2 h_table(const Table2& r_table, const Mat2& mu) {
  Poly2 g;
  for (const auto& [kl, value] : r_table) {
    const auto [k, l] = kl;
    if (k + l < 2 || k + l > kMaxDegree) continue;
    g(k, l) = value;
  }
  const Poly2 h = g.substitute_linear(mu);
  Table2 out;
  for (int m = 0; m <= kMaxDegree; ++m)
    for (int n = 0; m + n <= kMaxDegree; ++n)
      if (m + n >= 2) out[{m, n}] = h(m, n);
  return out;
}

Table2 h_table(const OscillatorForm& form) { return h_table(form.r_table, form.mu); }

OscillatorForm oscillator_form(const CanonicalSystem& cs) {
  OscillatorForm form;
  std::tie(form.gamma, form.mu) = gamma1(cs);
  form.r_table = r_coefficients(cs, form.gamma);
  form.h_table = h_table(form.r_table, form.mu);
  form.tau = cs.tau;
  form.lambda = cs.lambda;
  return form;
}

HCanonical h_canonical_check(const Table2& r, double tau, double lambda) {
  const auto R = [&](int k, int l) { return table_at(r, k, l); };
  const double L = lambda, t = tau;
  const double L2 = L * L, L3 = L2 * L, L4 = L3 * L, L5 = L4 * L;
  HCanonical h{};
  h.h03 = -8.0 * R(0, 3) / L3;
  h.h21 = -2.0 * (R(2, 1) * L2 + 2.0 * R(1, 2) * t * L + 3.0 * R(0, 3) * t * t) / L3;
  h.h05 = -32.0 * R(0, 5) / L5;
  h.h23 = -8.0 * (R(2, 3) * L2 + 4.0 * R(1, 4) * t * L + 10.0 * R(0, 5) * t * t) / L5;
  h.h41 = -2.0 *
          (R(4, 1) * L4 + 2.0 * R(3, 2) * t * L3 + 3.0 * R(2, 3) * t * t * L2 +
           4.0 * R(1, 4) * t * t * t * L + 5.0 * R(0, 5) * t * t * t * t) /
          L5;
  return h;
}

}  // namespace hopfkit
