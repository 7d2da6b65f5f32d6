#pragma once

#include <map>
#include <utility>

#include "hopfkit/field.hpp"

namespace hopfkit {

/// Monomial index (k, l) of x^k y^l, or (m, n) of z^m zdot^n.
using Index2 = std::pair<int, int>;
using Table2 = std::map<Index2, double>;

/// The field rewritten in coordinates X = M X~ whose Jacobian at the
/// origin is (1/2)[[tau, -Lambda], [Lambda, tau]], with the vector field
/// multiplied by `time_scale` so that Lambda(a_star) = 2.
struct CanonicalSystem {
  double a = 0.0;
  ParamField vf_c;            // constant curves, frozen at `a`
  PlanarPolynomial field;     // same coefficients, ready for integration
  Mat2 linmap;                // M
  double time_scale = 1.0;    // s: canonical field = s M^{-1} F(M X~)
  double tau = 0.0;           // canonical trace
  double lambda = 0.0;        // canonical Lambda
};

/// Data of the equivalent second-order oscillator
///   z'' - tau z' + delta z = G(z, z').
struct OscillatorForm {
  Mat2 gamma;                 // Gamma = Gamma_1
  Mat2 mu;                    // Gamma^{-1} = (mu_ij)
  Table2 r_table;             // R_kl, 2 <= k+l <= 6
  Table2 h_table;             // H_mn, 2 <= m+n <= 6
  double tau = 0.0;
  double lambda = 0.0;
};

CanonicalSystem canonicalize(const ParamField& vf, double a);

/// Gamma_1 = [[1, 0], [tau/2, -Lambda/2]] of the canonical Jacobian and its inverse.
std::pair<Mat2, Mat2> gamma1(const CanonicalSystem& cs);

/// R_kl = gamma_21 sigma^1_kl + gamma_22 sigma^2_kl for 2 <= k+l <= 6.
Table2 r_coefficients(const CanonicalSystem& cs, const Mat2& gamma);

/// H_mn from the multinomial expansion of sum R_kl (mu11 z + mu12 z')^k (mu21 z + mu22 z')^l.
Table2 h_table(const Table2& r_table, const Mat2& mu);
Table2 h_table(const OscillatorForm& form);

OscillatorForm oscillator_form(const CanonicalSystem& cs);

/// Closed forms of H03, H21, H05, H23, H41 for Gamma = Gamma_1 in
/// canonical coordinates.
struct HCanonical {
  double h03, h21, h05, h23, h41;
};
HCanonical h_canonical_check(const Table2& r_table, double tau, double lambda);

inline double table_at(const Table2& t, int i, int j) {
  auto it = t.find({i, j});
  return it == t.end() ? 0.0 : it->second;
}

}  // namespace hopfkit
