#pragma once

#include <functional>
#include <utility>

#include "hopfkit/canonical.hpp"

namespace hopfkit {

/// K_mn = integral over [0, 2pi] of cos^m(phi) sin^(n+1)(phi), closed form.
/// Zero unless m is even and n is odd.
double k_integral(int m, int n);

/// Averaged radial and angular coefficients of the oscillator, in the
/// unscaled amplitude A = eps r:
///   p(A) = p3 A^2 + p5 A^4,   q(A) = q2 A^2 + q4 A^4,   both + O(A^6).
struct DiscriminantSeries {
  double p3 = 0.0;
  double p5 = 0.0;
  double q2 = 0.0;
  double q4 = 0.0;
  int valid_degree = 6;
};

/// p3 = -(3 H03 + H21)/4,  p5 = -(5 H05 + H23 + H41)/8.
std::pair<double, double> hopf_coefficients(const Table2& h);

/// q2 = -(3 H30 + H12)/8,  q4 = -(5 H50 + H32 + H14)/16.
std::pair<double, double> q_coefficients(const Table2& h);

DiscriminantSeries discriminant_series(const Table2& h);

double p_series_eval(const DiscriminantSeries& ds, double amplitude);
double q_series_eval(const DiscriminantSeries& ds, double amplitude);

/// G(s, sdot) as seen by the normalized oscillator s'' - tau s' + delta s = eps G:
/// sum H_mn eps^(m+n-1) s^m sdot^n for a given H table.
std::function<double(double, double)> scaled_oscillator_rhs(const Table2& h, double eps);

struct QuadratureResult {
  double value;
  double error;
};

/// Adaptive Gauss-Kronrod (7/15) on [lo, hi]. Throws QuadratureFailure if
/// the absolute error estimate exceeds `abs_tol` within 2^20 evaluations.
QuadratureResult adaptive_quadrature(const std::function<double(double)>& f, double lo,
                                     double hi, double abs_tol);

/// Averaged p and q of an oscillator right-hand side by quadrature:
///   p = eps/(pi r)   int sin(phi) G(r cos phi, -r sin phi) dphi
///   q = -eps/(2pi r) int cos(phi) G(r cos phi, -r sin phi) dphi
std::pair<double, double> pq_numeric(const std::function<double(double, double)>& G, double r,
                                     double eps);

}  // namespace hopfkit
