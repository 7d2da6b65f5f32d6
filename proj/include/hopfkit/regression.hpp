#pragma once

#include <span>

namespace hopfkit {

/// y ~ constant * x^exponent by ordinary least squares on (ln x, ln |y|).
struct PowerLawFit {
  double exponent = 0.0;
  double constant = 0.0;
  double r_squared = 0.0;
  // 1 - RSS / max(Syy, n * 0.01) in log space: equals R^2 for data that
  // vary, and stays near 1 for a flat series fitted well.
  double quality = 0.0;
  double rms_log_residual = 0.0;
  int count = 0;
};

/// Requires at least two points with x > 0 and y != 0.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Mean of ln|y| - exponent ln x, exponentiated: the constant of a power
/// law with a prescribed exponent.
double power_law_constant(std::span<const double> x, std::span<const double> y,
                          double exponent);

}  // namespace hopfkit
