// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hopfkit/atlas.hpp"
#include "hopfkit/averaging.hpp"
#include "hopfkit/canonical.hpp"
#include "hopfkit/classify.hpp"
#include "hopfkit/report.hpp"
#include "hopfkit/verify.hpp"
#include "oracles.hpp"

using namespace hopfkit;
using oracle::kPi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

bool rel_close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return v;
}

void k_table(Outcome& o) {
  const struct {
    int m, n;
    double exact;
  } rows[] = {{0, 3, 3 * kPi / 4}, {2, 1, kPi / 4}, {0, 5, 5 * kPi / 8}, {2, 3, kPi / 8}, {4, 1, kPi / 8}};
  double worst_exact = 0, worst_quad = 0;
  for (const auto& r : rows) {
    const double k = k_integral(r.m, r.n);
    const double q = adaptive_quadrature(
                         [&](double p) { return std::pow(std::cos(p), r.m) * std::pow(std::sin(p), r.n + 1); },
                         0.0, 2 * kPi, 1e-14)
                         .value;
    worst_exact = std::max(worst_exact, std::abs(k - r.exact) / r.exact);
    worst_quad = std::max(worst_quad, std::abs(k - q) / r.exact);
  }
  o.detail << "max rel err closed form " << worst_exact << ", vs quadrature " << worst_quad;
  o.require(worst_exact <= 4e-16, "closed form");
  o.require(worst_quad <= 1e-12, "quadrature");
}

void h_equivalence(Outcome& o) {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  double worst = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    Table2 r;
    oracle::RTable ro;
    for (int d = 2; d <= 5; ++d)
      for (int k = 0; k <= d; ++k) ro[{k, d - k}] = r[{k, d - k}] = U(rng);
    const Mat2 mu{U(rng), U(rng), U(rng), U(rng)};
    const oracle::Mu m{mu.a11, mu.a12, mu.a21, mu.a22};
    const Table2 h = h_table(r, mu);
    const std::pair<double, double> pairs[] = {
        {table_at(h, 0, 3), oracle::H03(ro, m)}, {table_at(h, 2, 1), oracle::H21(ro, m)},
        {table_at(h, 0, 5), oracle::H05(ro, m)}, {table_at(h, 2, 3), oracle::H23(ro, m)},
        {table_at(h, 4, 1), oracle::H41(ro, m)}};
    for (const auto& [x, y] : pairs)
      worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}));
  }
  o.detail << "1000 draws, max rel err " << worst;
  o.require(worst <= 1e-12, "relative error");
}

void series_quadrature(Outcome& o) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0;
  for (int draw = 0; draw < 100; ++draw) {
    Table2 h;
    for (int d = 2; d <= 5; ++d)
      for (int m = 0; m <= d; ++m) h[{m, d - m}] = U(rng);
    const DiscriminantSeries ds = discriminant_series(h);
    for (double eps : {0.02, 0.05, 0.1})
      for (double r : {0.5, 1.0}) {
        const double A = eps * r;
        const auto [p, q] = pq_numeric(scaled_oscillator_rhs(h, eps), r, eps);
        const double ps = eps * p_series_eval(ds, A), qs = eps * q_series_eval(ds, A);
        worst = std::max(worst, std::abs(p - ps) / std::abs(ps));
        worst = std::max(worst, std::abs(q - qs) / std::abs(qs));
      }
  }
  o.detail << "eps r <= 0.1, max rel err " << worst;
  o.require(worst <= 1e-3, "relative error");
}

void multi2_radii(Outcome& o) {
  const auto c = find_cycles(atlas_system("multi2"), 0.04, 1e-3, 1.0);
  const auto [r1, r2] = oracle::multi2_radii(0.04);
  o.detail << c.size() << " cycles";
  for (const auto& x : c) o.detail << ", " << x.radius << " " << to_string(x.stability);
  o.require(c.size() == 2, "two cycles");
  if (c.size() != 2) return;
  o.require(rel_close(c[0].radius, r1, 5e-3), "inner radius");
  o.require(rel_close(c[1].radius, r2, 5e-3), "outer radius");
  o.require(c[0].stability == Stability::Stable, "inner Stable");
  o.require(c[1].stability == Stability::Unstable, "outer Unstable");
}

void multi2_scaling(Outcome& o) {
  const SweepReport s = scaling_sweep(atlas_system("multi2"), geometric(2e-6, 2e-3, 8));
  const Classification c = classify(atlas_system("multi2"), tau_window(2e-6, 2e-3, 8));
  o.detail << "radius exponent " << s.fitted_radius_exponent << ", " << to_string(c.kind)
           << ", N=" << c.leading_index << ", gamma " << c.gamma;
  o.require(!s.inconclusive, "sweep conclusive");
  o.require(std::abs(s.fitted_radius_exponent - 1.0 / 6) <= 0.02, "exponent 1/6");
  o.require(c.kind == Kind::DegenerateSecondKind, "second kind");
  o.require(c.leading_index == 1, "N = 1");
  o.require(std::abs(c.gamma - 2.0 / 3) <= 0.05, "gamma 2/3");
}

void semistable(Outcome& o) {
  const auto c = find_cycles(atlas_system("semistable2"), 0.04, 1e-3, 1.0);
  o.detail << c.size() << " cycles";
  for (const auto& x : c)
    o.detail << ", " << x.radius << " " << to_string(x.stability) << " (displacements "
             << x.displacement_inside << ", " << x.displacement_outside << ")";
  o.require(c.size() == 1, "one cycle");
  if (c.size() != 1) return;
  o.require(rel_close(c[0].radius, std::sqrt(0.04), 5e-3), "radius 0.2");
  o.require(c[0].stability == Stability::Semistable, "Semistable");
  o.require(c[0].displacement_inside != 0 &&
                std::signbit(c[0].displacement_inside) == std::signbit(c[0].displacement_outside),
            "equal displacement signs");
}

void first_kind(Outcome& o) {
  const auto taus = geometric(2e-6, 2e-3, 8);
  for (const char* name : {"persist1", "persist-semi"}) {
    const ParamField vf = atlas_system(name);
    const Classification c = classify(vf, tau_window());
    const SweepReport s = scaling_sweep(vf, taus);
    double worst = 0;
    bool every = true;
    for (const auto& per : s.cycles) {
      if (per.empty()) every = false;
      for (const auto& x : per) worst = std::max(worst, std::abs(x.radius - 1.0));
    }
    o.detail << name << ": " << to_string(c.kind) << ", max |radius - 1| " << worst
             << ", emerging branches " << s.emerging_branch_count << "; ";
    o.require(c.kind == Kind::DegenerateFirstKind, std::string(name) + " first kind");
    o.require(every && worst <= 1e-3, std::string(name) + " radius 1");
    o.require(s.emerging_branch_count == 0, std::string(name) + " no emerging family");
  }
}

void infinity(Outcome& o) {
  const ParamField vf = atlas_system("infinity", 1.0);
  const Classification c = classify(vf, tau_window());
  VerifyOptions opt;
  opt.disk_radius = 50.0;
  const auto cyc = find_cycles(vf, 0.01, 1.0, 20.0, opt);
  o.detail << to_string(c.kind) << ", " << cyc.size() << " cycles";
  for (const auto& x : cyc)
    o.detail << ", " << x.radius << " " << to_string(x.stability) << " (return derivative "
             << x.return_derivative << ")";
  o.require(c.kind == Kind::DegenerateFirstKind, "first kind");
  o.require(cyc.size() == 1, "one cycle");
  if (cyc.size() != 1) return;
  o.require(rel_close(cyc[0].radius, 10.0, 1e-2), "radius 10");
  o.require(cyc[0].stability == Stability::Unstable, "Unstable");
}

void sufficient(Outcome& o) {
  const double Q3 = std::cbrt(2.0), Q5 = 0.375 / std::cbrt(2.0);
  const double a = 0.04, tau = 2 * a * a * a;
  const SufficientCondition s = sufficient_condition(Q3, Q5, 2.0 / 3.0, tau);
  const auto [r1, r2] = oracle::multi2_radii(a);
  o.detail << "delta " << s.delta << ", " << to_string(s.verdict) << ", radii";
  for (double r : s.predicted_radii) o.detail << " " << r;
  o.require(std::abs(s.delta - 0.3968) <= 5e-4, "delta");
  o.require(s.verdict == SufficientCondition::Verdict::TwoCycles, "TwoCycles");
  o.require(s.predicted_radii.size() == 2, "two radii");
  if (s.predicted_radii.size() != 2) return;
  const auto found = find_cycles(atlas_system("multi2"), a, 1e-3, 1.0);
  o.require(rel_close(s.predicted_radii[0], r1, 1e-2) && rel_close(s.predicted_radii[1], r2, 1e-2),
            "radii vs closed form");
  if (found.size() == 2)
    o.require(rel_close(s.predicted_radii[0], found[0].radius, 1e-2) &&
                  rel_close(s.predicted_radii[1], found[1].radius, 1e-2),
              "radii vs detected cycles");
}

void baseline(Outcome& o) {
  const ParamField vf = atlas_system("cubic-std");
  const Classification c = classify(vf, tau_window());
  const SweepReport s = scaling_sweep(vf, geometric(2e-6, 2e-3, 8));
  double worst_r = 0, worst_t = 0;
  bool every = true;
  for (std::size_t i = 0; i < s.cycles.size(); ++i) {
    if (s.cycles[i].size() != 1) every = false;
    for (const auto& x : s.cycles[i]) {
      worst_r = std::max(worst_r, std::abs(x.radius / std::sqrt(s.a_values[i]) - 1.0));
      worst_t = std::max(worst_t, std::abs(x.period - 2 * kPi));
    }
  }
  o.detail << to_string(c.kind) << ", N=" << c.leading_index << ", max rel radius err " << worst_r
           << ", exponent " << s.fitted_radius_exponent << ", max |T - 2pi| " << worst_t;
  o.require(c.kind == Kind::NonDegenerate, "NonDegenerate");
  o.require(c.leading_index == 1, "N = 1");
  o.require(every && worst_r <= 1e-2, "radius sqrt(a)");
  o.require(std::abs(s.fitted_radius_exponent - 0.5) <= 0.02, "exponent 1/2");
  o.require(worst_t <= 1e-6, "period 2 pi");
}

void pipeline_ratio(Outcome& o) {
  const std::pair<const char*, double> cases[] = {{"multi2", 0.1}, {"cubic-std", 0.04}};
  for (const auto& [name, a] : cases) {
    const nlohmann::json r = analyze_report(atlas_system(name), a);
    const double ratio = r.at("pipeline").at("p3").get<double>() /
                         r.at("empirical").at("fit").at("c3").get<double>();
    bool warned = false;
    for (const auto& w : r.at("warnings")) warned |= w.get<std::string>() == "pipeline/empirical ratio 0.5";
    o.detail << name << " ratio " << ratio << (warned ? " (warned); " : " (no warning); ");
    o.require(std::abs(ratio - 0.5) <= 0.025, std::string(name) + " ratio");
    o.require(warned, std::string(name) + " warning");
  }
}

void one_sided(Outcome& o) {
  for (const char* name : {"multi2", "semistable2"})
    for (double a : {-0.1, -0.04}) {
      const auto c = find_cycles(atlas_system(name), a, 1e-4, 1.5);
      o.detail << name << "@" << a << ": " << c.size() << "; ";
      o.require(c.empty(), std::string(name) + " no cycles");
    }
}

void frequency_bound(Outcome& o) {
  const SweepReport s = scaling_sweep(atlas_system("multi2"), geometric(2e-6, 2e-3, 8));
  double K = 0;
  int n = 0;
  for (std::size_t i = 0; i < s.cycles.size(); ++i)
    for (const auto& x : s.cycles[i]) {
      K = std::max(K, std::abs(x.frequency - 1.0) / std::cbrt(std::abs(s.tau_values[i])));
      ++n;
    }
  o.detail << n << " cycles, K = " << K << ", max |w - 1| " << s.max_frequency_deviation;
  o.require(n > 0, "cycles measured");
  o.require(std::isfinite(K), "finite K");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"K integral table", k_table},
      {"H polynomial equivalence", h_equivalence},
      {"series vs quadrature", series_quadrature},
      {"multi2 radii and stability", multi2_radii},
      {"multi2 scaling and classification", multi2_scaling},
      {"semistable2 single semistable cycle", semistable},
      {"first kind persistent cycles", first_kind},
      {"cycle from infinity", infinity},
      {"sufficient condition", sufficient},
      {"non-degenerate baseline", baseline},
      {"pipeline/empirical ratio", pipeline_ratio},
      {"one-sidedness", one_sided},
      {"frequency bound", frequency_bound},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
