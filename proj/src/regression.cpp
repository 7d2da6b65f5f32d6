#include "hopfkit/regression.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hopfkit/errors.hpp"

namespace hopfkit {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("power-law fit: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0 || !std::isfinite(y[i])) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  const std::size_t n = lx.size();
  if (n < 2) throw DomainError("power-law fit needs at least two usable points");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("power-law fit: all abscissae coincide");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.constant = std::exp(my - fit.exponent * mx);
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - my - fit.exponent * (lx[i] - mx);
    rss += e * e;
  }
  fit.rms_log_residual = std::sqrt(rss / n);
  fit.quality = std::clamp(1.0 - rss / std::max(syy, 0.01 * n), 0.0, 1.0);
  fit.count = static_cast<int>(n);
  return fit;
}

double power_law_constant(std::span<const double> x, std::span<const double> y,
                          double exponent) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0) continue;
    sum += std::log(std::abs(y[i])) - exponent * std::log(x[i]);
    ++n;
  }
  if (n == 0) throw DomainError("power-law constant: no usable points");
  return std::exp(sum / n);
}

}  // namespace hopfkit
