#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hopfkit {

/// Largest total degree handled anywhere in the pipeline (6-jet).
inline constexpr int kMaxDegree = 6;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  double norm() const { return std::hypot(x, y); }
};

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static Mat2 identity() { return {}; }
  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }
  Mat2 inverse() const;
  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  friend Mat2 operator*(const Mat2& p, const Mat2& q);
  friend Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }
};

/// Dense bivariate polynomial sum c[k][l] x^k y^l with k + l <= kMaxDegree.
class Poly2 {
 public:
  static constexpr int kSide = kMaxDegree + 1;

  double operator()(int k, int l) const { return c_[idx(k, l)]; }
  double& operator()(int k, int l) { return c_[idx(k, l)]; }

  double eval(double x, double y) const;
  bool is_zero() const;

  friend Poly2 operator+(const Poly2& p, const Poly2& q);
  friend Poly2 operator*(double s, const Poly2& p);
  /// Product truncated at total degree kMaxDegree.
  friend Poly2 operator*(const Poly2& p, const Poly2& q);

  /// p(m11 x + m12 y, m21 x + m22 y), expanded multinomially.
  Poly2 substitute_linear(const Mat2& m) const;

 private:
  static constexpr std::size_t idx(int k, int l) {
    return static_cast<std::size_t>(k * kSide + l);
  }
  std::array<double, kSide * kSide> c_{};
};

/// A planar polynomial vector field with coefficients frozen at one
/// parameter value. Evaluation is the hot path of every integration.
class PlanarPolynomial {
 public:
  PlanarPolynomial() = default;
  PlanarPolynomial(Poly2 p1, Poly2 p2);

  const Poly2& component(int m) const { return m == 1 ? p1_ : p2_; }

  Vec2 operator()(Vec2 X) const {
    std::array<double, kMaxDegree + 1> xp{}, yp{};
    xp[0] = yp[0] = 1.0;
    for (int i = 1; i <= degree_; ++i) {
      xp[i] = xp[i - 1] * X.x;
      yp[i] = yp[i - 1] * X.y;
    }
    Vec2 out;
    for (const Term& t : terms_) {
      const double mono = xp[t.k] * yp[t.l];
      out.x += t.c1 * mono;
      out.y += t.c2 * mono;
    }
    return out;
  }

  /// Jacobian at the origin (linear coefficients).
  Mat2 jacobian() const;
  int degree() const { return degree_; }

  /// s * M^{-1} F(M X): the field expressed in coordinates X = M X~
  /// with time measured so the vector field is multiplied by s.
  PlanarPolynomial transformed(const Mat2& M, double s) const;

  /// Time reversal combined with the reflection y -> -y. Cycles keep
  /// their radius and counter-clockwise orientation; stability flips.
  PlanarPolynomial time_reversed() const;

 private:
  struct Term {
    int k, l;
    double c1, c2;
  };
  Poly2 p1_, p2_;
  std::vector<Term> terms_;
  int degree_ = 0;
};

}  // namespace hopfkit
