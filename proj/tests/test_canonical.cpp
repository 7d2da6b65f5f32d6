#include <doctest.h>

#include <cmath>
#include <random>

#include "hopfkit/atlas.hpp"
#include "hopfkit/canonical.hpp"
#include "hopfkit/errors.hpp"
#include "oracles.hpp"

using namespace hopfkit;
using doctest::Approx;

namespace {

bool rel_close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

}  // namespace

TEST_CASE("canonical basis") {
  const CanonicalSystem cs = canonicalize(atlas_system("cubic-std"), 0.0);
  CHECK(cs.linmap.a11 == Approx(1.0));
  CHECK(cs.linmap.a12 == Approx(0.0).scale(1.0));
  CHECK(cs.linmap.a21 == Approx(0.0).scale(1.0));
  CHECK(cs.linmap.a22 == Approx(1.0));
  CHECK(cs.time_scale == Approx(1.0));

  std::map<CoeffKey, ParamCurve> c{{{1, 0, 1}, ParamCurve::constant(-4.0)},
                                   {{2, 1, 0}, ParamCurve::constant(1.0)}};
  const CanonicalSystem lin = canonicalize(ParamField(1, c), 0.0);
  CHECK(std::abs(lin.linmap.a11) == Approx(2.0));
  CHECK(std::abs(lin.linmap.a22) == Approx(1.0));
  CHECK(lin.linmap.a12 == Approx(0.0).scale(1.0));
  CHECK(lin.linmap.a21 == Approx(0.0).scale(1.0));
  CHECK(lin.time_scale == Approx(0.5));
  const Mat2 J = lin.field.jacobian();
  CHECK(J.a11 == Approx(0.0).scale(1.0));
  CHECK(J.a12 == Approx(-1.0));
  CHECK(J.a21 == Approx(1.0));

  std::map<CoeffKey, ParamCurve> saddle{{{1, 1, 0}, ParamCurve::constant(1.0)},
                                        {{2, 0, 1}, ParamCurve::constant(-1.0)}};
  CHECK_THROWS_AS(canonicalize(ParamField(1, saddle), 0.0), NotHopfRegion);
}

TEST_CASE("canonical Jacobian has the rotation form") {
  for (const auto& e : atlas())
    for (double a : {-0.1, 0.02, 0.2}) {
      const CanonicalSystem cs = canonicalize(e.builder(1.0), a);
      const Mat2 J = cs.field.jacobian();
      CHECK(J.a11 == Approx(0.5 * cs.tau).scale(1.0));
      CHECK(J.a22 == Approx(0.5 * cs.tau).scale(1.0));
      CHECK(J.a21 == Approx(0.5 * cs.lambda));
      CHECK(J.a12 == Approx(-0.5 * cs.lambda));
    }
}

TEST_CASE("canonical field is the conjugated, rescaled field") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  // A system with a skewed linear part so that M is not trivial.
  std::map<CoeffKey, ParamCurve> c{{{1, 1, 0}, ParamCurve({{1, 1.0}})},
                                   {{1, 0, 1}, ParamCurve::constant(-3.0)},
                                   {{2, 1, 0}, ParamCurve::constant(2.0)},
                                   {{2, 0, 1}, ParamCurve::constant(0.5)},
                                   {{1, 2, 1}, ParamCurve::constant(0.7)},
                                   {{2, 0, 3}, ParamCurve::constant(-1.1)},
                                   {{1, 5, 0}, ParamCurve::constant(0.3)}};
  const ParamField vf(5, c, -0.5);
  const double a = -0.45;
  const CanonicalSystem cs = canonicalize(vf, a);
  const Mat2 Minv = cs.linmap.inverse();
  for (int i = 0; i < 50; ++i) {
    const Vec2 X{U(rng), U(rng)};
    const Vec2 expect = cs.time_scale * (Minv * eval_field(vf, a, cs.linmap * X));
    const Vec2 got = cs.field(X);
    CHECK(got.x == Approx(expect.x).epsilon(1e-12).scale(1.0));
    CHECK(got.y == Approx(expect.y).epsilon(1e-12).scale(1.0));
    const Vec2 viaf = eval_field(cs.vf_c, 123.0, X);
    CHECK(viaf.x == Approx(got.x).epsilon(1e-14).scale(1.0));
  }
  CHECK((cs.linmap * Vec2{0.0, 1.0}).norm() == Approx(1.0));
}

TEST_CASE("gamma1") {
  const CanonicalSystem cs = canonicalize(atlas_system("multi2"), 0.1);
  const auto [g, mu] = gamma1(cs);
  CHECK(g.a11 == 1.0);
  CHECK(g.a12 == 0.0);
  CHECK(g.a21 == Approx(0.001));
  CHECK(g.a22 == Approx(-1.0));
  CHECK(mu.a11 == Approx(1.0));
  CHECK(mu.a12 == Approx(0.0).scale(1.0));
  CHECK(mu.a21 == Approx(0.001));
  CHECK(mu.a22 == Approx(-1.0));
}

TEST_CASE("R and H tables") {
  {
    const OscillatorForm f = oscillator_form(canonicalize(atlas_system("cubic-std"), 0.0));
    CHECK(table_at(f.r_table, 2, 1) == Approx(1.0));
    CHECK(table_at(f.r_table, 0, 3) == Approx(1.0));
    CHECK(table_at(f.h_table, 2, 1) == Approx(-1.0));
    CHECK(table_at(f.h_table, 0, 3) == Approx(-1.0));
  }
  {
    const OscillatorForm f = oscillator_form(canonicalize(atlas_system("multi2"), 0.1));
    CHECK(table_at(f.r_table, 2, 1) == Approx(0.01));
    CHECK(table_at(f.r_table, 0, 3) == Approx(0.01));
    CHECK(table_at(f.r_table, 3, 0) == Approx(-1e-5));
    CHECK(table_at(f.r_table, 0, 5) == Approx(-0.01875));
    CHECK(table_at(f.h_table, 0, 5) == Approx(0.01875));
    const HCanonical hc = h_canonical_check(f.r_table, f.tau, f.lambda);
    // -2 (R21 L^2 + 2 R12 tau L + 3 R03 tau^2) / L^3 with tau = 0.002, L = 2.
    const double expect = -2.0 * (0.01 * 4.0 + 2.0 * -1e-5 * 0.002 * 2.0 + 3.0 * 0.01 * 4e-6) / 8.0;
    CHECK(hc.h21 == Approx(expect).epsilon(1e-12));
    CHECK(hc.h21 == Approx(-0.01000001).epsilon(1e-12));
    CHECK(hc.h21 == Approx(table_at(f.h_table, 2, 1)).epsilon(1e-12));
  }
  CHECK(h_table(Table2{}, Mat2{1, 0, 0.3, -2}).empty() == false);
  for (const auto& [k, v] : h_table(Table2{}, Mat2{1, 0, 0.3, -2})) CHECK(v == 0.0);

  const HCanonical one = h_canonical_check(Table2{{{0, 3}, 1.0}}, 0.0, 2.0);
  CHECK(one.h03 == Approx(-1.0));
  const HCanonical zero = h_canonical_check(Table2{}, 0.3, 2.0);
  CHECK(zero.h03 == 0.0);
  CHECK(zero.h21 == 0.0);
  CHECK(zero.h05 == 0.0);
  CHECK(zero.h23 == 0.0);
  CHECK(zero.h41 == 0.0);
}

TEST_CASE("multinomial H agrees with hand-expanded polynomials for general mu") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  int bad = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    Table2 r;
    oracle::RTable ro;
    for (int d = 2; d <= 5; ++d)
      for (int k = 0; k <= d; ++k) {
        const double v = U(rng);
        r[{k, d - k}] = v;
        ro[{k, d - k}] = v;
      }
    const Mat2 mu{U(rng), U(rng), U(rng), U(rng)};
    const oracle::Mu m{mu.a11, mu.a12, mu.a21, mu.a22};
    const Table2 h = h_table(r, mu);
    bad += !rel_close(table_at(h, 0, 3), oracle::H03(ro, m), 1e-12);
    bad += !rel_close(table_at(h, 2, 1), oracle::H21(ro, m), 1e-12);
    bad += !rel_close(table_at(h, 0, 5), oracle::H05(ro, m), 1e-12);
    bad += !rel_close(table_at(h, 2, 3), oracle::H23(ro, m), 1e-12);
    bad += !rel_close(table_at(h, 4, 1), oracle::H41(ro, m), 1e-12);
  }
  CHECK(bad == 0);
}

TEST_CASE("closed forms agree with the multinomial table at Gamma_1") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> L(0.5, 3.0);
  int bad = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    Table2 r;
    for (int d = 2; d <= 5; ++d)
      for (int k = 0; k <= d; ++k) r[{k, d - k}] = U(rng);
    const double tau = 0.5 * U(rng), lambda = L(rng);
    const Mat2 mu = Mat2{1.0, 0.0, 0.5 * tau, -0.5 * lambda}.inverse();
    const Table2 h = h_table(r, mu);
    const HCanonical c = h_canonical_check(r, tau, lambda);
    bad += !rel_close(c.h03, table_at(h, 0, 3), 1e-11);
    bad += !rel_close(c.h21, table_at(h, 2, 1), 1e-11);
    bad += !rel_close(c.h05, table_at(h, 0, 5), 1e-11);
    bad += !rel_close(c.h23, table_at(h, 2, 3), 1e-11);
    bad += !rel_close(c.h41, table_at(h, 4, 1), 1e-11);
  }
  CHECK(bad == 0);
}
