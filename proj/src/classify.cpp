#include "hopfkit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "hopfkit/canonical.hpp"
#include "hopfkit/integrator.hpp"
#include "hopfkit/regression.hpp"

namespace hopfkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// One revolution with the polar angle as independent variable; state
// (ln r, t, integral of r^2 dt). The sample is placed at the RMS radius of
// the revolution, where the r^2 term of the time-averaged discriminant is exact.
DiscriminantSample revolution(const PlanarPolynomial& F, double tau, double r0, double disk) {
  using DP = DormandPrince<3>;
  DP::Tolerance tol;
  tol.rtol = 1e-13;
  tol.atol = {1e-13, 1e-13, 1e-13 * r0 * r0};
  const DP dp(tol);
  const auto f = [&](double th, const DP::State& y) {
    const double r = std::exp(y[0]);
    if (!(r < disk)) throw RevolutionFailure("orbit left the disk of radius " + std::to_string(disk));
    if (!(r > 1e-200)) throw RevolutionFailure("orbit collapsed onto the origin");
    const double c = std::cos(th), s = std::sin(th);
    const Vec2 v = F({r * c, r * s});
    const double radial = c * v.x + s * v.y;
    const double angular = c * v.y - s * v.x;  // r dtheta/dt
    if (!(angular > 0.0))
      throw RevolutionFailure("angle stopped increasing at r = " + std::to_string(r));
    const double dt = r / angular;
    return DP::State{radial / angular, dt, r * r * dt};
  };
  DP::State y{std::log(r0), 0.0, 0.0};
  dp.run(f, 0.0, y, kTwoPi, 1e-2, [&](const DP::Step& st) {
    y = st.y1;
    return true;
  });
  const double log_ratio = y[0] - std::log(r0);
  return {std::sqrt(y[2] / y[1]), tau - 2.0 * log_ratio / y[1]};
}

struct Roots {
  std::vector<double> radii;
  bool double_root = false;
};

Roots positive_roots(double c3, double c5, double tau, double tol_double) {
  Roots out;
  if (c5 == 0.0) {
    if (c3 != 0.0 && tau / c3 > 0.0) out.radii.push_back(std::sqrt(tau / c3));
    return out;
  }
  const double disc = c3 * c3 + 4.0 * c5 * tau;
  if (std::abs(disc) <= tol_double * c3 * c3) {
    const double u = -c3 / (2.0 * c5);
    if (u > 0.0) {
      out.radii.push_back(std::sqrt(u));
      out.double_root = true;
    }
    return out;
  }
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  // Cancellation-free pair of roots.
  const double qq = -0.5 * (c3 + std::copysign(sq, c3));
  for (double u : {qq / c5, qq != 0.0 ? -tau / qq : kNaN})
    if (u > 0.0 && std::isfinite(u)) out.radii.push_back(std::sqrt(u));
  std::sort(out.radii.begin(), out.radii.end());
  return out;
}

struct RootBranch {
  std::vector<double> abs_tau;
  std::vector<double> radius;
};

// Nearest neighbour continuation in sqrt(u) from the largest |tau| down.
std::vector<RootBranch> track_roots(std::vector<const TauEvidence*> side) {
  std::sort(side.begin(), side.end(), [](const TauEvidence* x, const TauEvidence* y) {
    return std::abs(x->tau) > std::abs(y->tau);
  });
  std::vector<RootBranch> branches;
  for (const TauEvidence* ev : side) {
    std::vector<bool> used(branches.size(), false);
    for (double rho : ev->roots) {
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < branches.size(); ++b) {
        if (used[b]) continue;
        const double last = branches[b].radius.back();
        const double dist = std::abs(std::log(rho / last));
        if (dist < best_dist || (dist == best_dist && last < branches[best].radius.back())) {
          best = static_cast<int>(b);
          best_dist = dist;
        }
      }
      if (best < 0 || best_dist > std::log(4.0)) {
        branches.push_back({{std::abs(ev->tau)}, {rho}});
        used.push_back(true);
      } else {
        branches[best].abs_tau.push_back(std::abs(ev->tau));
        branches[best].radius.push_back(rho);
        used[best] = true;
      }
    }
  }
  return branches;
}

CoefficientScaling scaling_of(int index, const std::vector<TauEvidence>& ev,
                              const ClassifyOptions& opt) {
  CoefficientScaling cs;
  cs.index = index;
  std::vector<double> t, c;
  for (const TauEvidence& e : ev) {
    const bool sig = index == 1 ? e.c3_significant : e.c5_significant;
    if (!sig) continue;
    t.push_back(std::abs(e.tau));
    c.push_back(index == 1 ? e.fit.c3 : e.fit.c5);
  }
  cs.significant_count = static_cast<int>(t.size());
  if (t.size() < 4) {
    cs.negligible = true;
    cs.note = "below measurement floor";
    return cs;
  }
  const PowerLawFit fit = fit_power_law(t, c);
  cs.exponent = fit.exponent;
  cs.amplitude_constant = fit.constant;
  cs.fit_quality = fit.quality;
  cs.negligible = cs.exponent >= 1.0 - opt.tol_eta || cs.amplitude_constant < opt.coefficient_floor;
  return cs;
}

}  // namespace

std::vector<DiscriminantSample> empirical_discriminant(const ParamField& vf, double a,
                                                       const std::vector<double>& r_grid,
                                                       double disk_radius) {
  const CanonicalSystem cs = canonicalize(vf, a);
  std::vector<DiscriminantSample> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 0.0)) throw DomainError("discriminant radii must be positive");
    out.push_back(revolution(cs.field, cs.tau, r, disk_radius));
  }
  return out;
}

HopfFit fit_hopf_coefficients(const std::vector<DiscriminantSample>& samples) {
  const std::size_t n = samples.size();
  if (n < 4) throw IllConditioned("need at least 4 discriminant samples");
  double rlo = std::numeric_limits<double>::infinity(), rhi = 0.0;
  for (const auto& s : samples) {
    rlo = std::min(rlo, s.r);
    rhi = std::max(rhi, s.r);
  }
  if (!(rlo > 0.0) || rhi < 2.0 * rlo)
    throw IllConditioned("samples must span at least a factor 2 in r");

  HopfFit fit;
  fit.count = static_cast<int>(n);
  if (std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.p == 0.0; }))
    return fit;

  // Columns r^2, r^4 scaled to unit norm, then Gram-Schmidt QR.
  std::vector<double> x1(n), x2(n), y(n);
  double n1 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 = samples[i].r * samples[i].r;
    x1[i] = r2;
    x2[i] = r2 * r2;
    y[i] = samples[i].p;
    n1 += x1[i] * x1[i];
    n2 += x2[i] * x2[i];
  }
  n1 = std::sqrt(n1);
  n2 = std::sqrt(n2);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] /= n1;
    x2[i] /= n2;
  }
  const double r11 = 1.0;
  const double r12 = std::inner_product(x1.begin(), x1.end(), x2.begin(), 0.0);
  std::vector<double> q2(n);
  for (std::size_t i = 0; i < n; ++i) q2[i] = x2[i] - r12 * x1[i];
  const double r22 = std::sqrt(std::inner_product(q2.begin(), q2.end(), q2.begin(), 0.0));

  // Singular values of the 2x2 triangle [[r11, r12], [0, r22]].
  const double fro2 = r11 * r11 + r12 * r12 + r22 * r22, det = r11 * r22;
  const double root = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
  const double smax = std::sqrt(0.5 * (fro2 + root));
  const double smin = det / smax;
  fit.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(fit.condition <= 1e12))
    throw IllConditioned("design matrix condition number " + std::to_string(fit.condition));
  for (double& v : q2) v /= r22;

  const double b1 = std::inner_product(x1.begin(), x1.end(), y.begin(), 0.0);
  const double b2 = std::inner_product(q2.begin(), q2.end(), y.begin(), 0.0);
  const double z2 = b2 / r22;
  const double z1 = (b1 - r12 * z2) / r11;
  fit.c3 = z1 / n1;
  fit.c5 = z2 / n2;

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 = samples[i].r * samples[i].r;
    const double e = y[i] - fit.c3 * r2 - fit.c5 * r2 * r2;
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  // Covariance sigma^2 (R^T R)^{-1} in scaled coordinates.
  const double sigma2 = n > 2 ? rss / (n - 2) : 0.0;
  const double inv11 = (r22 * r22 + r12 * r12) / (r11 * r11 * r22 * r22);
  const double inv22 = 1.0 / (r22 * r22);
  fit.se3 = std::sqrt(sigma2 * inv11) / n1;
  fit.se5 = std::sqrt(sigma2 * inv22) / n2;
  return fit;
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::NonDegenerate:
      return "NonDegenerate";
    case Kind::DegenerateFirstKind:
      return "DegenerateFirstKind";
    case Kind::DegenerateSecondKind:
      return "DegenerateSecondKind";
  }
  return "?";
}

std::string to_string(Criticality c) {
  return c == Criticality::Supercritical ? "Supercritical" : "Subcritical";
}

std::string to_string(SufficientCondition::Verdict v) {
  switch (v) {
    case SufficientCondition::Verdict::TwoCycles:
      return "TwoCycles";
    case SufficientCondition::Verdict::OneSemistable:
      return "OneSemistable";
    case SufficientCondition::Verdict::None:
      return "None";
  }
  return "?";
}

std::string to_string(CyclePrediction::Source s) {
  return s == CyclePrediction::Source::Series ? "Series" : "Empirical";
}

SufficientCondition sufficient_condition(double Q3, double Q5, double gamma, double tau,
                                         double tol) {
  if (!(Q3 > 0.0) || !(Q5 > 0.0)) throw DomainError("sufficient condition needs Q3 > 0, Q5 > 0");
  if (!(gamma > 0.5 && gamma < 1.0)) throw DomainError("sufficient condition needs 1/2 < gamma < 1");
  SufficientCondition out;
  out.delta = Q3 * Q3 - 4.0 * Q5;
  if (std::abs(out.delta) <= tol) {
    out.verdict = SufficientCondition::Verdict::OneSemistable;
    out.u_roots = {Q3 / (2.0 * Q5)};
  } else if (out.delta > 0.0) {
    out.verdict = SufficientCondition::Verdict::TwoCycles;
    const double sq = std::sqrt(out.delta);
    out.u_roots = {(Q3 - sq) / (2.0 * Q5), (Q3 + sq) / (2.0 * Q5)};
  } else {
    out.verdict = SufficientCondition::Verdict::None;
  }
  if (tau != 0.0)
    for (double u : out.u_roots)
      out.predicted_radii.push_back(std::pow(std::abs(tau), 0.5 * (1.0 - gamma)) * std::sqrt(u));
  return out;
}

std::vector<double> tau_window(double lo, double hi, int count, bool positive, bool negative) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("tau window needs 0 < lo < hi");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    if (negative) out.push_back(-t);
    if (positive) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TauEvidence discriminant_evidence(const ParamField& vf, double a, const ClassifyOptions& opt) {
  const int n_r = std::max(
      4, static_cast<int>(std::ceil(opt.points_per_decade * std::log10(opt.r_max / opt.r_min))) + 1);
  TauEvidence ev;
  ev.a = a;
  const CanonicalSystem cs = canonicalize(vf, a);
  ev.tau = jacobian_summary(vf, a).tau;
  for (int i = 0; i < n_r; ++i) {
    const double r = opt.r_min * std::pow(opt.r_max / opt.r_min, static_cast<double>(i) / (n_r - 1));
    DiscriminantSample s;
    try {
      s = revolution(cs.field, cs.tau, r, opt.disk_radius);
    } catch (const RevolutionFailure&) {
      break;
    }
    ev.samples.push_back(s);
    if (std::abs(s.p) > opt.window_factor * std::abs(cs.tau) && ev.samples.size() >= 4) break;
  }
  ev.fit = fit_hopf_coefficients(ev.samples);
  const double rmax2 = ev.samples.back().r * ev.samples.back().r;
  const double floor = 1e-4 * std::abs(cs.tau);
  ev.c3_significant = std::abs(ev.fit.c3) > 3.0 * ev.fit.se3 && std::abs(ev.fit.c3) * rmax2 >= floor;
  ev.c5_significant =
      std::abs(ev.fit.c5) > 3.0 * ev.fit.se5 && std::abs(ev.fit.c5) * rmax2 * rmax2 >= floor;
  const Roots roots = positive_roots(ev.c3_significant ? ev.fit.c3 : 0.0,
                                     ev.c5_significant ? ev.fit.c5 : 0.0, cs.tau, opt.tol_double);
  ev.roots = roots.radii;
  ev.double_root = roots.double_root;
  return ev;
}

Classification classify(const ParamField& vf, const std::vector<double>& taus,
                        const ClassifyOptions& opt) {
  int npos = 0, nneg = 0;
  for (double t : taus) {
    if (t > 0.0) ++npos;
    else if (t < 0.0) ++nneg;
    else throw DomainError("tau window must not contain 0");
  }
  if (std::max(npos, nneg) < 6) throw DomainError("tau window needs at least 6 values of one sign");

  Classification out;
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  for (double tau : sorted) {
    TauEvidence ev = discriminant_evidence(vf, a_of_tau(vf, tau), opt);
    ev.tau = tau;
    out.per_tau.push_back(std::move(ev));
  }

  out.smallest_root = kNaN;
  for (const TauEvidence& ev : out.per_tau)
    for (double r : ev.roots)
      if (!(out.smallest_root <= r)) out.smallest_root = r;

  // Scaling of each coefficient over the side(s) of the window.
  out.evidence = {scaling_of(1, out.per_tau, opt), scaling_of(2, out.per_tau, opt)};
  for (const CoefficientScaling& cs : out.evidence)
    if (!cs.negligible && cs.fit_quality < opt.min_fit_quality)
      throw InconclusiveFit("scaling fit of p" + std::to_string(2 * cs.index + 1) +
                            " has quality " + std::to_string(cs.fit_quality));

  if (std::all_of(out.evidence.begin(), out.evidence.end(),
                  [](const CoefficientScaling& c) { return c.negligible; })) {
    out.kind = Kind::DegenerateFirstKind;
    out.leading_index = 0;
    out.gamma = 0.0;
    out.radius_exponent = 0.0;
    out.omega_sign = sgn(out.per_tau.back().fit.c3) < 0.0 ? -1 : 1;
    return out;
  }

  // Root branches tending to 0, per side.
  struct Emerging {
    RootBranch branch;
    PowerLawFit fit;
  };
  std::vector<std::pair<double, std::vector<Emerging>>> sides;
  for (double side : {-1.0, 1.0}) {
    std::vector<const TauEvidence*> evs;
    for (const TauEvidence& ev : out.per_tau)
      if (sgn(ev.tau) == side) evs.push_back(&ev);
    std::vector<Emerging> em;
    for (RootBranch& b : track_roots(evs)) {
      if (b.radius.size() < 4) continue;
      const PowerLawFit f = fit_power_law(b.abs_tau, b.radius);
      if (f.exponent >= 0.05) em.push_back({std::move(b), f});
    }
    if (!em.empty()) sides.emplace_back(side, std::move(em));
  }
  if (sides.empty()) throw InconclusiveFit("no root branch of the fitted discriminant tends to 0");
  if (sides.size() > 1)
    throw MixedSigns("emerging roots found on both sides of the bifurcation");

  const double side = sides.front().first;
  const std::vector<Emerging>& em = sides.front().second;
  const Emerging* smallest = &em.front();
  for (const Emerging& e : em)
    if (e.branch.radius.back() < smallest->branch.radius.back()) smallest = &e;
  if (smallest->fit.quality < opt.min_fit_quality)
    throw InconclusiveFit("root radius fit quality " + std::to_string(smallest->fit.quality));

  int doubles = 0, on_side = 0;
  for (const TauEvidence& ev : out.per_tau)
    if (sgn(ev.tau) == side) {
      ++on_side;
      doubles += ev.double_root ? 1 : 0;
    }
  out.emerging_root_count = static_cast<int>(em.size());
  if (em.size() == 1 && 2 * doubles > on_side) out.emerging_root_count = 2;

  out.fitted_root_exponent = smallest->fit.exponent;
  out.root_fit_quality = smallest->fit.quality;
  out.leading_index = out.evidence[0].negligible ? 2 : 1;
  const double g = 1.0 - 2.0 * out.leading_index * out.fitted_root_exponent;
  out.gamma = std::clamp(g, 0.0, std::nextafter(1.0, 0.0));
  out.radius_exponent = (1.0 - out.gamma) / (2.0 * out.leading_index);
  out.kind = out.gamma <= opt.tol_gamma ? Kind::NonDegenerate : Kind::DegenerateSecondKind;
  out.radius_constant =
      power_law_constant(smallest->branch.abs_tau, smallest->branch.radius, out.radius_exponent);
  out.criticality = side > 0.0 ? Criticality::Supercritical : Criticality::Subcritical;

  // omega: sign of the leading coefficient on the root side (majority).
  int votes = 0;
  for (const TauEvidence& ev : out.per_tau)
    if (sgn(ev.tau) == side)
      votes += static_cast<int>(sgn(out.leading_index == 1 ? ev.fit.c3 : ev.fit.c5));
  out.omega_sign = votes < 0 ? -1 : 1;

  // Sufficient condition from the fitted constants: p3 = Q3 |tau|^gamma,
  // p5 = -Q5 |tau|^(2 gamma - 1).
  if (out.kind == Kind::DegenerateSecondKind && out.leading_index == 1 && out.gamma > 0.5 &&
      !out.evidence[1].negligible) {
    std::vector<double> t3, c3, t5, c5;
    for (const TauEvidence& ev : out.per_tau) {
      if (sgn(ev.tau) != side) continue;
      if (ev.c3_significant) {
        t3.push_back(std::abs(ev.tau));
        c3.push_back(ev.fit.c3);
      }
      if (ev.c5_significant) {
        t5.push_back(std::abs(ev.tau));
        c5.push_back(ev.fit.c5);
      }
    }
    bool c3_pos = !c3.empty(), c5_neg = !c5.empty();
    for (double v : c3) c3_pos = c3_pos && v > 0.0;
    for (double v : c5) c5_neg = c5_neg && v < 0.0;
    if (c3_pos && c5_neg) {
      out.sufficient_q3 = power_law_constant(t3, c3, out.gamma);
      out.sufficient_q5 = power_law_constant(t5, c5, 2.0 * out.gamma - 1.0);
      const double tau_ref = side * (t3.empty() ? 1.0 : t3.back());
      out.sufficient = sufficient_condition(out.sufficient_q3, out.sufficient_q5, out.gamma,
                                            tau_ref, opt.tol_double * c3.back() * c3.back() /
                                                         std::pow(t3.back(), 2.0 * out.gamma));
    }
  }
  return out;
}

std::vector<CyclePrediction> predict_cycles(double c3, double c5, double tau,
                                            const PredictOptions& opt) {
  std::vector<CyclePrediction> out;
  if (c3 == 0.0 && c5 == 0.0) return out;
  const Roots roots = positive_roots(c3, c5, tau, opt.tol_double);
  for (double rho : roots.radii) {
    CyclePrediction p;
    p.radius = rho;
    p.source = opt.source;
    const double A2 = rho * rho;
    p.frequency = 1.0 + opt.q2 * A2 + opt.q4 * A2 * A2;
    if (roots.double_root) {
      p.stability = Stability::Semistable;
    } else {
      const double dp = 2.0 * c3 * rho + 4.0 * c5 * rho * A2;
      p.stability = dp > 0.0 ? Stability::Stable : Stability::Unstable;
    }
    out.push_back(p);
  }
  return out;
}

Vec2 AsymptoticCycle::profile(double t) const {
  const Vec2 u{std::cos(frequency * t), -std::sin(frequency * t)};
  return amplitude * (mu * u);
}

double AsymptoticCycle::period() const { return kTwoPi / frequency; }

AsymptoticCycle asymptotic_cycle(const CyclePrediction& pred, const OscillatorForm& form,
                                 const DiscriminantSeries& ds) {
  AsymptoticCycle c;
  c.amplitude = pred.radius;
  const double A2 = pred.radius * pred.radius;
  c.frequency = 1.0 + ds.q2 * A2 + ds.q4 * A2 * A2;
  c.mu = form.mu;
  return c;
}

}  // namespace hopfkit
