#include "hopfkit/planar.hpp"

#include <algorithm>

namespace hopfkit {

Mat2 Mat2::inverse() const {
  const double d = det();
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

Mat2 operator*(const Mat2& p, const Mat2& q) {
  return {p.a11 * q.a11 + p.a12 * q.a21, p.a11 * q.a12 + p.a12 * q.a22,
          p.a21 * q.a11 + p.a22 * q.a21, p.a21 * q.a12 + p.a22 * q.a22};
}

double Poly2::eval(double x, double y) const {
  double sum = 0.0;
  double xk = 1.0;
  for (int k = 0; k <= kMaxDegree; ++k) {
    double yl = 1.0;
    for (int l = 0; k + l <= kMaxDegree; ++l) {
      sum += (*this)(k, l) * xk * yl;
      yl *= y;
    }
    xk *= x;
  }
  return sum;
}

bool Poly2::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

Poly2 operator+(const Poly2& p, const Poly2& q) {
  Poly2 r;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = p.c_[i] + q.c_[i];
  return r;
}

Poly2 operator*(double s, const Poly2& p) {
  Poly2 r;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = s * p.c_[i];
  return r;
}

Poly2 operator*(const Poly2& p, const Poly2& q) {
  Poly2 r;
  for (int k1 = 0; k1 <= kMaxDegree; ++k1)
    for (int l1 = 0; k1 + l1 <= kMaxDegree; ++l1) {
      const double a = p(k1, l1);
      if (a == 0.0) continue;
      for (int k2 = 0; k1 + l1 + k2 <= kMaxDegree; ++k2)
        for (int l2 = 0; k1 + l1 + k2 + l2 <= kMaxDegree; ++l2)
          r(k1 + k2, l1 + l2) += a * q(k2, l2);
    }
  return r;
}

Poly2 Poly2::substitute_linear(const Mat2& m) const {
  Poly2 u, v;  // the two linear forms
  u(1, 0) = m.a11;
  u(0, 1) = m.a12;
  v(1, 0) = m.a21;
  v(0, 1) = m.a22;

  std::array<Poly2, kSide> upow, vpow;
  upow[0](0, 0) = 1.0;
  vpow[0](0, 0) = 1.0;
  for (int i = 1; i < kSide; ++i) {
    upow[i] = upow[i - 1] * u;
    vpow[i] = vpow[i - 1] * v;
  }

  Poly2 out;
  for (int k = 0; k <= kMaxDegree; ++k)
    for (int l = 0; k + l <= kMaxDegree; ++l) {
      const double c = (*this)(k, l);
      if (c == 0.0) continue;
      out = out + c * (upow[k] * vpow[l]);
    }
  return out;
}

PlanarPolynomial::PlanarPolynomial(Poly2 p1, Poly2 p2) : p1_(p1), p2_(p2) {
  for (int k = 0; k <= kMaxDegree; ++k)
    for (int l = 0; k + l <= kMaxDegree; ++l) {
      const double c1 = p1_(k, l), c2 = p2_(k, l);
      if (c1 == 0.0 && c2 == 0.0) continue;
      terms_.push_back({k, l, c1, c2});
      degree_ = std::max(degree_, k + l);
    }
}

Mat2 PlanarPolynomial::jacobian() const {
  return {p1_(1, 0), p1_(0, 1), p2_(1, 0), p2_(0, 1)};
}

PlanarPolynomial PlanarPolynomial::transformed(const Mat2& M, double s) const {
  const Poly2 f1 = p1_.substitute_linear(M);
  const Poly2 f2 = p2_.substitute_linear(M);
  const Mat2 Minv = M.inverse();
  return {s * (Minv.a11 * f1 + Minv.a12 * f2), s * (Minv.a21 * f1 + Minv.a22 * f2)};
}

PlanarPolynomial PlanarPolynomial::time_reversed() const {
  // x' = -F1(x, -y), y' = F2(x, -y)
  const Mat2 reflect{1.0, 0.0, 0.0, -1.0};
  return {-1.0 * p1_.substitute_linear(reflect), p2_.substitute_linear(reflect)};
}

}  // namespace hopfkit
