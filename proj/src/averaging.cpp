#include "hopfkit/averaging.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "hopfkit/errors.hpp"

namespace hopfkit {

namespace {

double double_factorial(int n) {
  double r = 1.0;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

// Gauss-Kronrod 15-point abscissae and weights; the 7-point Gauss rule
// uses the odd-indexed Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const double fc = f(c);
  double k = kWgk[7] * fc;
  double g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double s = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    k += kWgk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  return {lo, hi, k * h, std::abs((k - g) * h)};
}

}  // namespace

double k_integral(int m, int n) {
  if (m < 0 || n < 0) throw DomainError("k_integral requires m, n >= 0");
  const int p = n + 1;
  if (m % 2 != 0 || p % 2 != 0) return 0.0;
  // int_0^{2pi} cos^m sin^p = 2pi (m-1)!! (p-1)!! / (m+p)!!  for m, p even.
  return 2.0 * std::numbers::pi * double_factorial(m - 1) * double_factorial(p - 1) /
         double_factorial(m + p);
}

std::pair<double, double> hopf_coefficients(const Table2& h) {
  const auto H = [&](int m, int n) { return table_at(h, m, n); };
  return {-(3.0 * H(0, 3) + H(2, 1)) / 4.0, -(5.0 * H(0, 5) + H(2, 3) + H(4, 1)) / 8.0};
}

std::pair<double, double> q_coefficients(const Table2& h) {
  const auto H = [&](int m, int n) { return table_at(h, m, n); };
  return {-(3.0 * H(3, 0) + H(1, 2)) / 8.0, -(5.0 * H(5, 0) + H(3, 2) + H(1, 4)) / 16.0};
}

DiscriminantSeries discriminant_series(const Table2& h) {
  DiscriminantSeries ds;
  std::tie(ds.p3, ds.p5) = hopf_coefficients(h);
  std::tie(ds.q2, ds.q4) = q_coefficients(h);
  return ds;
}

double p_series_eval(const DiscriminantSeries& ds, double amplitude) {
  if (amplitude < 0.0) throw DomainError("amplitude must be non-negative");
  const double u = amplitude * amplitude;
  return ds.p3 * u + ds.p5 * u * u;
}

double q_series_eval(const DiscriminantSeries& ds, double amplitude) {
  if (amplitude < 0.0) throw DomainError("amplitude must be non-negative");
  const double u = amplitude * amplitude;
  return ds.q2 * u + ds.q4 * u * u;
}

std::function<double(double, double)> scaled_oscillator_rhs(const Table2& h, double eps) {
  return [h, eps](double s, double sd) {
    double sum = 0.0;
    for (const auto& [mn, value] : h) {
      const auto [m, n] = mn;
      if (value == 0.0) continue;
      sum += value * std::pow(eps, m + n - 1) * std::pow(s, m) * std::pow(sd, n);
    }
    return sum;
  };
}

QuadratureResult adaptive_quadrature(const std::function<double(double)>& f, double lo,
                                     double hi, double abs_tol) {
  constexpr long kMaxEvaluations = 1L << 20;
  constexpr int kInitialPieces = 8;
  std::priority_queue<Segment> queue;
  long evaluations = 0;
  double value = 0.0, error = 0.0;
  for (int i = 0; i < kInitialPieces; ++i) {
    const Segment s = gk15(f, lo + (hi - lo) * i / kInitialPieces,
                           lo + (hi - lo) * (i + 1) / kInitialPieces);
    evaluations += 15;
    value += s.value;
    error += s.error;
    queue.push(s);
  }
  while (error > abs_tol) {
    if (evaluations + 30 > kMaxEvaluations)
      throw QuadratureFailure("error estimate " + std::to_string(error) +
                              " above tolerance after " + std::to_string(evaluations) +
                              " evaluations");
    const Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = gk15(f, worst.lo, mid), right = gk15(f, mid, worst.hi);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum to shed the drift of incremental updates.
  value = 0.0;
  error = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {value, error};
}

std::pair<double, double> pq_numeric(const std::function<double(double, double)>& G, double r,
                                     double eps) {
  if (!(r > 0.0)) throw DomainError("pq_numeric requires r > 0");
  constexpr double kTol = 1e-12;
  const double two_pi = 2.0 * std::numbers::pi;
  const auto on_circle = [&](double phi) { return G(r * std::cos(phi), -r * std::sin(phi)); };
  const QuadratureResult ps =
      adaptive_quadrature([&](double phi) { return std::sin(phi) * on_circle(phi); }, 0.0,
                          two_pi, kTol);
  const QuadratureResult qc =
      adaptive_quadrature([&](double phi) { return std::cos(phi) * on_circle(phi); }, 0.0,
                          two_pi, kTol);
  return {eps / (std::numbers::pi * r) * ps.value, -eps / (two_pi * r) * qc.value};
}

}  // namespace hopfkit
