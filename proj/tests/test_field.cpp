#include <doctest.h>

#include <cmath>
#include <random>

#include "hopfkit/atlas.hpp"
#include "hopfkit/errors.hpp"
#include "hopfkit/field.hpp"
#include "hopfkit/system_io.hpp"

using namespace hopfkit;
using doctest::Approx;

namespace {

ParamField linear(double a11, double a12, double a21, double a22) {
  std::map<CoeffKey, ParamCurve> c;
  if (a11 != 0) c[{1, 1, 0}] = ParamCurve::constant(a11);
  if (a12 != 0) c[{1, 0, 1}] = ParamCurve::constant(a12);
  if (a21 != 0) c[{2, 1, 0}] = ParamCurve::constant(a21);
  if (a22 != 0) c[{2, 0, 1}] = ParamCurve::constant(a22);
  return ParamField(1, c);
}

}  // namespace

TEST_CASE("eval_field on atlas systems") {
  const Vec2 v = eval_field(atlas_system("cubic-std"), 0.0, {1.0, 0.0});
  CHECK(v.x == Approx(-1.0));
  CHECK(v.y == Approx(1.0));

  const Vec2 w = eval_field(atlas_system("multi2"), 0.1, {1.0, 0.0});
  CHECK(w.x == Approx(0.00975).epsilon(1e-12));
  CHECK(w.y == Approx(1.0));

  for (const auto& e : atlas())
    for (double a : {-0.3, 0.0, 0.2}) {
      const Vec2 o = eval_field(e.builder(1.0), a, {0.0, 0.0});
      CHECK(o.x == 0.0);
      CHECK(o.y == 0.0);
    }
}

TEST_CASE("jacobian_summary") {
  const auto js = jacobian_summary(atlas_system("multi2"), 0.1);
  CHECK(js.tau == Approx(0.002).epsilon(1e-12));
  CHECK(js.delta == Approx(1.000001).epsilon(1e-12));
  REQUIRE(js.lambda);
  CHECK(*js.lambda == Approx(2.0).epsilon(1e-12));
  CHECK(js.hopf_ok);

  const auto rot = jacobian_summary(linear(0, -1, 1, 0), 0.3);
  CHECK(rot.tau == 0.0);
  CHECK(rot.delta == 1.0);
  CHECK(*rot.lambda == 2.0);
  CHECK(rot.hopf_ok);

  const auto saddle = jacobian_summary(linear(1, 0, 0, -1), 0.0);
  CHECK_FALSE(saddle.hopf_ok);
  CHECK_FALSE(saddle.lambda);
}

TEST_CASE("jacobian matches finite differences of the field") {
  for (const auto& e : atlas())
    for (double a : {-0.2, 0.05, 0.3}) {
      const ParamField vf = e.builder(1.0);
      const double h = 1e-6;
      const Vec2 fx = 0.5 / h * (eval_field(vf, a, {h, 0}) - eval_field(vf, a, {-h, 0}));
      const Vec2 fy = 0.5 / h * (eval_field(vf, a, {0, h}) - eval_field(vf, a, {0, -h}));
      const auto js = jacobian_summary(vf, a);
      CHECK(fx.x + fy.y == Approx(js.tau).epsilon(1e-8).scale(1.0));
      CHECK(fx.x * fy.y - fy.x * fx.y == Approx(js.delta).epsilon(1e-8));
      if (js.hopf_ok) CHECK(js.delta > 0.0);
    }
}

TEST_CASE("a_of_tau") {
  CHECK(a_of_tau(atlas_system("multi2"), 0.002) == Approx(0.1).epsilon(1e-12));
  CHECK(a_of_tau(atlas_system("cubic-std"), 0.5) == Approx(0.25).epsilon(1e-12));
  for (const auto& e : atlas()) CHECK(std::abs(a_of_tau(e.builder(1.0), 0.0)) < 1e-12);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-0.45, 0.45);
  for (const char* name : {"multi2", "cubic-std", "persist1", "infinity"}) {
    const ParamField vf = atlas_system(name);
    for (int i = 0; i < 50; ++i) {
      const double a = U(rng);
      CHECK(a_of_tau(vf, jacobian_summary(vf, a).tau) == Approx(a).epsilon(1e-10).scale(1.0));
    }
  }

  CHECK_THROWS_AS(a_of_tau(atlas_system("cubic-std"), 5.0), OutOfWindow);
  std::map<CoeffKey, ParamCurve> c{{{1, 1, 0}, ParamCurve({{2, 1.0}})},
                                   {{1, 0, 1}, ParamCurve::constant(-1.0)},
                                   {{2, 1, 0}, ParamCurve::constant(1.0)}};
  CHECK_THROWS_AS(a_of_tau(ParamField(1, c), 0.01), NonMonotoneTrace);
}

TEST_CASE("nonlinear_part") {
  const CoeffTable t = nonlinear_part(atlas_system("cubic-std"), 0.0);
  const CoeffTable expect{{{1, 3, 0}, -1.0}, {{1, 1, 2}, -1.0}, {{2, 2, 1}, -1.0}, {{2, 0, 3}, -1.0}};
  CHECK(t == expect);
  CHECK(nonlinear_part(linear(0, -1, 1, 0), 0.1).empty());

  // -a^2 r^2 X has four monomials, (3/16) a r^4 X six.
  const CoeffTable m = nonlinear_part(atlas_system("multi2"), 0.1);
  CHECK(m.size() == 10);
  CHECK(m.at({1, 3, 0}) == Approx(-0.01));
  CHECK(m.at({1, 3, 2}) == Approx(2 * 0.01875));
  CHECK(m.at({2, 0, 5}) == Approx(0.01875));
}

TEST_CASE("parameter curves and validation") {
  const ParamCurve signed_pow({}, PowerTerm{0.5, 2.0});
  CHECK(signed_pow(-0.04) == Approx(-0.4));
  const ParamCurve abs_pow({}, std::nullopt, PowerTerm{2.0, -1.0});
  CHECK(abs_pow(-0.1) == Approx(-0.01));
  CHECK_THROWS_AS(ParamCurve({}, PowerTerm{1, 1}, PowerTerm{1, 1}), InputError);
  CHECK_THROWS_AS(ParamCurve({}, PowerTerm{-1, 1}), InputError);
  CHECK_THROWS_AS(ParamCurve({{-1, 1.0}}), InputError);

  std::map<CoeffKey, ParamCurve> bad{{{1, 0, 0}, ParamCurve::constant(1.0)}};
  CHECK_THROWS_AS(ParamField(1, bad), InputError);
  std::map<CoeffKey, ParamCurve> high{{{1, 4, 0}, ParamCurve::constant(1.0)}};
  CHECK_THROWS_AS(ParamField(3, high), InputError);
  CHECK_THROWS_AS(ParamField(7, {}), InputError);
  std::map<CoeffKey, ParamCurve> m3{{{3, 1, 0}, ParamCurve::constant(1.0)}};
  CHECK_THROWS_AS(ParamField(1, m3), InputError);
}

TEST_CASE("infinity system uses |a|^(beta+1)") {
  const ParamField vf = atlas_system("infinity", 1.0);
  // r' = a r (1 - a^beta r^2) with a^beta = sign(a)|a|^beta.
  for (double a : {-0.2, 0.1}) {
    const Vec2 v = eval_field(vf, a, {2.0, 0.0});
    CHECK(v.x == Approx(a * 2.0 * (1.0 - std::copysign(std::abs(a), a) * 4.0)));
  }
  const ParamField vf2 = atlas_system("infinity", 2.0);
  const Vec2 v = eval_field(vf2, -0.1, {1.0, 0.0});
  CHECK(v.x == Approx(-0.1 * (1.0 + 0.01)));
}

TEST_CASE("system files round trip") {
  for (const auto& e : atlas()) {
    const ParamField vf = e.builder(1.5);
    const ParamField back = field_from_json(field_to_json(vf));
    for (double a : {-0.3, 0.01, 0.2}) {
      const Vec2 p{0.3, -0.7};
      CHECK(eval_field(back, a, p).x == eval_field(vf, a, p).x);
      CHECK(eval_field(back, a, p).y == eval_field(vf, a, p).y);
    }
  }
}

TEST_CASE("malformed system text names line and column") {
  try {
    parse_system("{\n  \"degree\": 3,\n  \"coefficients\": [ }\n");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_system("{\"degree\": 2}"), InputError);
  CHECK_THROWS_AS(atlas_system("no-such-system"), InputError);
}
