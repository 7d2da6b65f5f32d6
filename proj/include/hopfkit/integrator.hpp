#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "hopfkit/errors.hpp"

namespace hopfkit {

/// Dormand-Prince 5(4) embedded pair with the 4th-order continuous
/// extension. `System` is callable as `State f(double t, const State& y)`.
template <std::size_t N>
class DormandPrince {
 public:
  using State = std::array<double, N>;

  struct Tolerance {
    double rtol = 1e-10;
    std::array<double, N> atol{};
  };

  /// Result of one accepted step, with the dense-output coefficients
  /// covering [t0, t0 + h].
  struct Step {
    double t0 = 0.0, h = 0.0;
    State y0{}, y1{}, f0{}, f1{};
    std::array<State, 5> rcont{};

    State operator()(double t) const {
      const double th = (t - t0) / h, th1 = 1.0 - th;
      State out;
      for (std::size_t i = 0; i < N; ++i)
        out[i] = rcont[0][i] +
                 th * (rcont[1][i] + th1 * (rcont[2][i] + th * (rcont[3][i] + th1 * rcont[4][i])));
      return out;
    }
  };

  explicit DormandPrince(Tolerance tol) : tol_(tol) {}

  /// Single fixed step of size h from (t, y); returns the 5th-order
  /// solution and writes the error estimate norm.
  template <class System>
  State raw_step(const System& f, double t, const State& y, const State& k1, double h,
                 State& k7, double& err_norm, std::array<State, 7>* stages = nullptr) const {
    State k2, k3, k4, k5, k6, tmp, y1;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    k2 = f(t + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = f(t + h, y1);

    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = tol_.atol[i] + tol_.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      sum += (e / sc) * (e / sc);
    }
    err_norm = std::sqrt(sum / N);
    if (stages) *stages = {k1, k2, k3, k4, k5, k6, k7};
    return y1;
  }

  /// Adaptive integration from (t0, y0) towards t_end. `on_step(step)` is
  /// called after each accepted step and returns false to stop early.
  /// Returns the time reached.
  template <class System, class OnStep>
  double run(const System& f, double t0, State y0, double t_end, double h0,
             OnStep&& on_step) const {
    const double dir = t_end >= t0 ? 1.0 : -1.0;
    double t = t0, h = dir * std::abs(h0);
    State y = y0, k1 = f(t, y);
    double err_prev = 1e-4;
    int rejections = 0;
    while (dir * (t_end - t) > 0.0) {
      if (dir * (t + h - t_end) > 0.0) h = t_end - t;
      State k7;
      double err = 0.0;
      std::array<State, 7> k;
      const State y1 = raw_step(f, t, y, k1, h, k7, err, &k);
      if (!std::isfinite(err)) err = 1e10;
      if (err <= 1.0) {
        Step s;
        s.t0 = t;
        s.h = h;
        s.y0 = y;
        s.y1 = y1;
        s.f0 = k1;
        s.f1 = k7;
        for (std::size_t i = 0; i < N; ++i) {
          const double ydiff = y1[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          s.rcont[0][i] = y[i];
          s.rcont[1][i] = ydiff;
          s.rcont[2][i] = bspl;
          s.rcont[3][i] = ydiff - h * k7[i] - bspl;
          s.rcont[4][i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                               d6 * k[5][i] + d7 * k[6][i]);
        }
        t += h;
        y = y1;
        k1 = k7;
        rejections = 0;
        if (!on_step(static_cast<const Step&>(s))) return t;
        // PI step-size control
        const double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
        h *= std::clamp(std::isfinite(fac) ? fac : 5.0, 0.2, 5.0);
        err_prev = std::max(err, 1e-4);
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (++rejections > 60)
          throw StepFailure("too many consecutive step rejections at t = " + std::to_string(t));
      }
      if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
        throw StepFailure("step size underflow at t = " + std::to_string(t));
    }
    return t;
  }

 private:
  Tolerance tol_;

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

}  // namespace hopfkit
