#include "hopfkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "hopfkit/canonical.hpp"

namespace hopfkit {

namespace {

using DP = DormandPrince<2>;
using State = DP::State;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

DP make_integrator(double tol, double scale) {
  if (!(tol >= 1e-13 && tol <= 1e-6))
    throw DomainError("integrator tolerance must lie in [1e-12, 1e-6]");
  DP::Tolerance t;
  t.rtol = tol;
  t.atol = {tol * scale, tol * scale};
  return DP(t);
}

auto rhs(const PlanarPolynomial& F) {
  return [&F](double, const State& y) {
    const Vec2 v = F({y[0], y[1]});
    return State{v.x, v.y};
  };
}

// Three-point Gauss-Legendre integral of |X(t)| over [t0, t1] of one dense step.
double norm_integral(const DP::Step& s, double t0, double t1) {
  static constexpr double kNodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double kWeights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double c = 0.5 * (t0 + t1), h = 0.5 * (t1 - t0);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const State y = s(c + h * kNodes[i]);
    sum += kWeights[i] * std::hypot(y[0], y[1]);
  }
  return sum * h;
}

struct ReturnDetail {
  ReturnResult result;
  double norm_integral = 0.0;
};

ReturnDetail return_map(const PlanarPolynomial& F, double r, const VerifyOptions& opt,
                        bool accumulate_norm = false) {
  if (!(r > 0.0)) throw DomainError("return map requires r > 0");
  if (r > opt.disk_radius)
    throw Escape("start radius " + std::to_string(r) + " outside the working disk");
  const DP dp = make_integrator(opt.tol, r);
  const auto f = rhs(F);

  std::optional<ReturnDetail> found;
  double accumulated = 0.0;
  dp.run(f, 0.0, State{r, 0.0}, opt.max_time, 1e-2, [&](const DP::Step& s) {
    if (std::hypot(s.y1[0], s.y1[1]) > opt.disk_radius)
      throw Escape("orbit from r = " + std::to_string(r) + " left the disk of radius " +
                   std::to_string(opt.disk_radius) + " at t = " + std::to_string(s.t0 + s.h));
    const bool crossing = s.y0[1] < 0.0 && s.y1[1] >= 0.0 && s.y1[0] > 0.0;
    if (!crossing) {
      if (accumulate_norm) accumulated += norm_integral(s, s.t0, s.t0 + s.h);
      return true;
    }
    // Bracket the section crossing on the dense output.
    double lo = s.t0, hi = s.t0 + s.h;
    double ylo = s.y0[1], yhi = s.y1[1];
    double tc = hi;
    for (int it = 0; it < 200 && yhi != 0.0; ++it) {
      double mid = lo - ylo * (hi - lo) / (yhi - ylo);
      if (!(mid > lo && mid < hi) || it % 3 == 2) mid = 0.5 * (lo + hi);
      const double ym = s(mid)[1];
      if (ym < 0.0) {
        lo = mid;
        ylo = ym;
      } else {
        hi = mid;
        yhi = ym;
      }
      tc = hi;
      if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    // Newton polish with full-order steps from the start of the step.
    State y = s(tc), k7;
    double err = 0.0;
    for (int it = 0; it < 4; ++it) {
      const double h = tc - s.t0;
      y = h > 0.0 ? dp.raw_step(f, s.t0, s.y0, s.f0, h, k7, err) : s.y0;
      const Vec2 v = F({y[0], y[1]});
      if (v.y == 0.0) break;
      const double dt = -y[1] / v.y;
      tc += dt;
      if (std::abs(dt) < 1e-15 * std::max(1.0, tc)) break;
    }
    y = dp.raw_step(f, s.t0, s.y0, s.f0, tc - s.t0, k7, err);
    if (accumulate_norm) accumulated += norm_integral(s, s.t0, tc);
    found = ReturnDetail{{std::hypot(y[0], y[1]), tc}, accumulated};
    return false;
  });
  if (!found)
    throw NoReturn("no return to the section from r = " + std::to_string(r) + " within t = " +
                   std::to_string(opt.max_time));
  return *found;
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

class CycleFinder {
 public:
  CycleFinder(PlanarPolynomial F, double a, double tau, const VerifyOptions& opt)
      : F_(std::move(F)), a_(a), tau_(tau), opt_(opt) {}

  double displacement(double r) const { return return_map(F_, r, opt_).result.r_return - r; }

  double fine_displacement(double r) const {
    VerifyOptions fine = opt_;
    fine.tol = std::min(opt_.tol, 1e-12);
    return return_map(F_, r, fine).result.r_return - r;
  }

  std::optional<double> try_displacement(double r) const {
    try {
      return displacement(r);
    } catch (const NumericError&) {
      return std::nullopt;
    }
  }

  double refine_root(double lo, double hi, double dlo, double dhi) const {
    if (dlo == 0.0) return lo;
    if (dhi == 0.0) return hi;
    std::uintmax_t max_iter = 200;
    const auto [x0, x1] = boost::math::tools::toms748_solve(
        [this](double r) { return displacement(r); }, lo, hi, dlo, dhi,
        boost::math::tools::eps_tolerance<double>(44), max_iter);
    return 0.5 * (x0 + x1);
  }

  CycleRecord record(double rho, Stability stability) const {
    const ReturnDetail det = return_map(F_, rho, opt_, true);
    CycleRecord c;
    c.section_radius = rho;
    c.period = det.result.t_return;
    c.frequency = 2.0 * std::numbers::pi / c.period;
    c.radius = det.norm_integral / det.result.t_return;
    c.stability = stability;
    c.a = a_;
    c.tau = tau_;
    const double h = 1e-4 * rho;
    c.return_derivative = 1.0 + (displacement(rho + h) - displacement(rho - h)) / (2.0 * h);
    c.displacement_inside = try_displacement(rho * (1.0 - opt_.semistable_offset)).value_or(kNaN);
    c.displacement_outside = try_displacement(rho * (1.0 + opt_.semistable_offset)).value_or(kNaN);
    return c;
  }

  // Local minimum of |d| without a sign change between lo and hi.
  void touch_candidate(double lo, double hi, double sign_side,
                       std::vector<CycleRecord>& out) const {
    const auto abs_d = [&](double r) { return std::abs(displacement(r)); };
    std::uintmax_t max_iter = 100;
    auto [rho, dabs] = boost::math::tools::brent_find_minima(abs_d, lo, hi, 30, max_iter);
    rho = refine_double_root(rho, sign_side);
    const double dmin = fine_displacement(rho);
    if (auto c = semistable_at(rho, dmin)) {
      out.push_back(*c);
      return;
    }
    if (dmin != 0.0 && sgn(dmin) != sign_side) {
      // Two simple cycles closer than the scan spacing.
      const double dlo = displacement(lo), dhi = displacement(hi);
      const double r1 = refine_root(lo, rho, dlo, dmin);
      const double r2 = refine_root(rho, hi, dmin, dhi);
      out.push_back(record(r1, dlo > 0.0 ? Stability::Stable : Stability::Unstable));
      out.push_back(record(r2, dmin > 0.0 ? Stability::Stable : Stability::Unstable));
    }
  }

  // Near a double root |d| is flat down to the integration noise; the
  // vertex of a parabola through wider samples locates it better.
  double refine_double_root(double rho, double side) const {
    for (double rel : {1e-2, 1e-3}) {
      const double h = rel * rho;
      const double dm = fine_displacement(rho - h), d0 = fine_displacement(rho),
                   dp = fine_displacement(rho + h);
      const double curv = dm - 2.0 * d0 + dp;
      if (curv == 0.0 || sgn(curv) != side) break;
      const double step = 0.5 * h * (dm - dp) / curv;
      if (std::abs(step) > 10.0 * h) break;
      rho += step;
    }
    return rho;
  }

  // Double root at measurement resolution: equal displacement signs at
  // rho (1 +- offset), |d(rho)| negligible against them, R' close to 1.
  std::optional<CycleRecord> semistable_at(double rho, double d_rho) const {
    std::optional<double> din, dout;
    try {
      din = fine_displacement(rho * (1.0 - opt_.semistable_offset));
      dout = fine_displacement(rho * (1.0 + opt_.semistable_offset));
    } catch (const NumericError&) {
      return std::nullopt;
    }
    if (*din == 0.0 || sgn(*din) != sgn(*dout)) return std::nullopt;
    if (!(std::abs(d_rho) <= 1e-3 * std::min(std::abs(*din), std::abs(*dout)))) return std::nullopt;
    CycleRecord c = record(rho, Stability::Semistable);
    if (std::abs(c.return_derivative - 1.0) > opt_.tol_rd) return std::nullopt;
    return c;
  }

 private:
  PlanarPolynomial F_;
  double a_, tau_;
  VerifyOptions opt_;
};

}  // namespace

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable:
      return "Stable";
    case Stability::Unstable:
      return "Unstable";
    case Stability::Semistable:
      return "Semistable";
  }
  return "?";
}

Vec2 Trajectory::at(double t) const {
  if (steps.empty()) throw DomainError("empty trajectory");
  auto it = std::lower_bound(steps.begin(), steps.end(), t,
                             [](const DP::Step& s, double v) { return s.t0 + s.h < v; });
  if (it == steps.end()) it = std::prev(steps.end());
  const State y = (*it)(t);
  return {y[0], y[1]};
}

Trajectory integrate(const PlanarPolynomial& field, Vec2 x0, double t_end, double tol,
                     double disk_radius) {
  const DP dp = make_integrator(tol, std::max(x0.norm(), 1e-300));
  Trajectory traj;
  dp.run(rhs(field), 0.0, State{x0.x, x0.y}, t_end, 1e-2, [&](const DP::Step& s) {
    traj.steps.push_back(s);
    if (std::hypot(s.y1[0], s.y1[1]) > disk_radius)
      throw Escape("trajectory left the disk of radius " + std::to_string(disk_radius) +
                   " at t = " + std::to_string(s.t0 + s.h));
    return true;
  });
  return traj;
}

Trajectory integrate(const ParamField& vf, double a, Vec2 x0, double t_end, double tol,
                     double disk_radius) {
  return integrate(vf.at(a), x0, t_end, tol, disk_radius);
}

ReturnResult poincare_map(const PlanarPolynomial& canonical_field, double r,
                          const VerifyOptions& opt) {
  if (opt.reverse_time) return return_map(canonical_field.time_reversed(), r, opt).result;
  return return_map(canonical_field, r, opt).result;
}

ReturnResult poincare_map(const ParamField& vf, double a, double r, const VerifyOptions& opt) {
  return poincare_map(canonicalize(vf, a).field, r, opt);
}

std::vector<CycleRecord> find_cycles(const ParamField& vf, double a, double r_min, double r_max,
                                     const VerifyOptions& opt) {
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw DomainError("find_cycles requires 0 < r_min < r_max");
  PlanarPolynomial F = canonicalize(vf, a).field;
  if (opt.reverse_time) F = F.time_reversed();
  const double tau = jacobian_summary(vf, a).tau;
  const CycleFinder finder(F, a, tau, opt);

  const int n = std::max(
      9, static_cast<int>(std::ceil(opt.probes_per_decade * std::log10(r_max / r_min))) + 1);
  std::vector<double> r(n);
  std::vector<std::optional<double>> d(n);
  for (int i = 0; i < n; ++i) {
    r[i] = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (n - 1));
    d[i] = finder.try_displacement(r[i]);
  }

  std::vector<CycleRecord> out;
  for (int i = 0; i + 1 < n; ++i) {
    if (!d[i] || !d[i + 1]) continue;
    const double d0 = *d[i], d1 = *d[i + 1];
    if (d0 == 0.0 && i > 0) continue;  // counted as the right end of the previous pair
    if (d0 * d1 > 0.0 || (d0 == 0.0 && d1 == 0.0)) continue;
    if (d1 == 0.0 && i + 2 < n && d[i + 2] && sgn(*d[i + 2]) == sgn(d0)) continue;
    const double rho = finder.refine_root(r[i], r[i + 1], d0, d1);
    const double left = d0 != 0.0 ? d0 : -d1;
    out.push_back(finder.record(rho, left > 0.0 ? Stability::Stable : Stability::Unstable));
  }
  for (int k = 1; k + 1 < n; ++k) {
    if (!d[k - 1] || !d[k] || !d[k + 1]) continue;
    const double s = sgn(*d[k]);
    if (s == 0.0 || sgn(*d[k - 1]) != s || sgn(*d[k + 1]) != s) continue;
    if (!(std::abs(*d[k]) < std::abs(*d[k - 1]) && std::abs(*d[k]) <= std::abs(*d[k + 1])))
      continue;
    finder.touch_candidate(r[k - 1], r[k + 1], s, out);
  }

  std::sort(out.begin(), out.end(), [](const CycleRecord& x, const CycleRecord& y) {
    return x.section_radius < y.section_radius;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const CycleRecord& x, const CycleRecord& y) {
                          return std::abs(x.section_radius - y.section_radius) <=
                                 1e-6 * y.section_radius;
                        }),
            out.end());

  // Adjacent simple roots of opposite stability that are indistinguishable
  // from a double root.
  std::vector<CycleRecord> merged;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i + 1 < out.size() && out[i].stability != Stability::Semistable &&
        out[i + 1].stability != Stability::Semistable &&
        out[i].stability != out[i + 1].stability &&
        out[i + 1].section_radius - out[i].section_radius <=
            opt.semistable_offset * out[i].section_radius) {
      double rho = std::sqrt(out[i].section_radius * out[i + 1].section_radius);
      const auto d_in = finder.try_displacement(rho * (1.0 - opt.semistable_offset));
      if (d_in && *d_in != 0.0) rho = finder.refine_double_root(rho, sgn(*d_in));
      if (auto c = finder.semistable_at(rho, finder.fine_displacement(rho))) {
        merged.push_back(*c);
        ++i;
        continue;
      }
    }
    merged.push_back(out[i]);
  }
  return merged;
}

namespace {

struct Branch {
  std::vector<int> tau_index;
  std::vector<const CycleRecord*> cycles;
};

// Nearest-neighbour continuation of cycle radii from the largest |tau|
// down to the smallest; ties go to the smaller radius.
std::vector<Branch> track_branches(const std::vector<int>& order,
                                   const std::vector<std::vector<CycleRecord>>& cycles) {
  std::vector<Branch> branches;
  for (int idx : order) {
    std::vector<bool> used(branches.size(), false);
    for (const CycleRecord& c : cycles[idx]) {
      int best = -1;
      double best_dist = std::log(2.0);
      for (std::size_t b = 0; b < branches.size(); ++b) {
        if (used[b]) continue;
        const double dist = std::abs(std::log(c.radius / branches[b].cycles.back()->radius));
        if (dist < best_dist ||
            (best >= 0 && dist == best_dist &&
             branches[b].cycles.back()->radius < branches[best].cycles.back()->radius)) {
          best = static_cast<int>(b);
          best_dist = dist;
        }
      }
      if (best < 0) {
        branches.push_back({{idx}, {&c}});
        used.push_back(true);
      } else {
        branches[best].tau_index.push_back(idx);
        branches[best].cycles.push_back(&c);
        used[best] = true;
      }
    }
  }
  return branches;
}

}  // namespace

SweepReport scaling_sweep(const ParamField& vf, const std::vector<double>& tau_values,
                          const SweepOptions& opt) {
  if (tau_values.size() < 6) throw DomainError("scaling_sweep needs at least 6 tau values");
  const double side = sgn(tau_values.front());
  for (double t : tau_values)
    if (sgn(t) != side || t == 0.0)
      throw DomainError("scaling_sweep tau values must be nonzero and share one sign");

  SweepReport rep;
  rep.tau_values = tau_values;
  for (double tau : tau_values) {
    const double a = a_of_tau(vf, tau);
    if (!jacobian_summary(vf, a).hopf_ok)
      throw NotHopfRegion("tau = " + std::to_string(tau) + " lies outside the Hopf region");
    rep.a_values.push_back(a);
    rep.cycles.push_back(find_cycles(vf, a, opt.r_min, opt.r_max, opt.verify));
  }

  const int n = static_cast<int>(tau_values.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return std::abs(tau_values[i]) > std::abs(tau_values[j]); });
  const std::vector<Branch> branches = track_branches(order, rep.cycles);

  rep.smallest_cycle_radii.assign(n, kNaN);
  const Branch* emerging = nullptr;
  for (const Branch& b : branches) {
    std::vector<double> ts, rs;
    for (std::size_t i = 0; i < b.cycles.size(); ++i) {
      ts.push_back(std::abs(tau_values[b.tau_index[i]]));
      rs.push_back(b.cycles[i]->radius);
    }
    if (b.cycles.size() >= 2) {
      const PowerLawFit fit = fit_power_law(ts, rs);
      if (fit.exponent >= 0.05) {
        ++rep.emerging_branch_count;
        if (!emerging || b.cycles.back()->radius < emerging->cycles.back()->radius)
          emerging = &b;
        continue;
      }
    }
    for (const CycleRecord* c : b.cycles) rep.persistent_cycles.push_back(*c);
  }

  if (emerging) {
    std::vector<double> ts, rs;
    for (std::size_t i = 0; i < emerging->cycles.size(); ++i) {
      rep.smallest_cycle_radii[emerging->tau_index[i]] = emerging->cycles[i]->radius;
      ts.push_back(std::abs(tau_values[emerging->tau_index[i]]));
      rs.push_back(emerging->cycles[i]->radius);
    }
    const PowerLawFit fit = fit_power_law(ts, rs);
    rep.fitted_radius_exponent = fit.exponent;
    rep.fitted_radius_constant = fit.constant;
    rep.radius_fit_r_squared = fit.r_squared;
    if (fit.count < 4) {
      rep.inconclusive = true;
      rep.note = "fewer than 4 tau values carry an emerging cycle";
    } else if (fit.r_squared < 0.95) {
      rep.inconclusive = true;
      rep.note = "radius power-law fit has R^2 below 0.95";
    }
  } else {
    rep.inconclusive = true;
    rep.note = "no emerging cycle family";
  }
  std::sort(rep.persistent_cycles.begin(), rep.persistent_cycles.end(),
            [](const CycleRecord& x, const CycleRecord& y) {
              return std::tie(x.tau, x.radius) < std::tie(y.tau, y.radius);
            });

  // Frequency: |freq - 1| <= |tau|^kappa for all cycles, with kappa as large as possible.
  double kappa = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (const CycleRecord& c : rep.cycles[i]) {
      const double dev = std::max(std::abs(c.frequency - 1.0), 1e-15);
      rep.max_frequency_deviation = std::max(rep.max_frequency_deviation, std::abs(c.frequency - 1.0));
      kappa = std::min(kappa, std::log(dev) / std::log(std::abs(tau_values[i])));
    }
  rep.fitted_frequency_exponent_bound = std::isfinite(kappa) ? kappa : 0.0;
  return rep;
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "tau,radius,period,stability,return_derivative\n";
  for (std::size_t i = 0; i < report.cycles.size(); ++i)
    for (const CycleRecord& c : report.cycles[i])
      os << report.tau_values[i] << ',' << c.radius << ',' << c.period << ','
         << to_string(c.stability) << ',' << c.return_derivative << '\n';
  return os.str();
}

}  // namespace hopfkit
