#include "aurora/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace aurora {

Affine2 identity_affine() {
  Affine2 a = Affine2::Zero();
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  return a;
}

Affine2 rigid_affine(double degrees, const Eigen::Vector2d& centre, const Eigen::Vector2d& shift) {
  const double t = degrees * std::numbers::pi / 180.0;
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Affine2 a;
  a.leftCols<2>() = r;
  a.col(2) = centre - r * centre + shift;
  return a;
}

Eigen::Vector2d apply(const Affine2& a, const Eigen::Vector2d& p) {
  return a.leftCols<2>() * p + a.col(2);
}

Affine2 compose(const Affine2& outer, const Affine2& inner) {
  Affine2 c;
  c.leftCols<2>() = outer.leftCols<2>() * inner.leftCols<2>();
  c.col(2) = outer.leftCols<2>() * inner.col(2) + outer.col(2);
  return c;
}

double determinant(const Affine2& a) { return a.leftCols<2>().determinant(); }

Affine2 invert(const Affine2& a) {
  const double det = determinant(a);
  if (!(std::abs(det) > 1e-12)) throw ValidationError("affine transform is singular");
  const Eigen::Matrix2d inv = a.leftCols<2>().inverse();
  Affine2 out;
  out.leftCols<2>() = inv;
  out.col(2) = -inv * a.col(2);
  return out;
}

Image<float> warp_image(const Image<float>& src, const Affine2& a) {
  const Affine2 back = invert(a);
  const int h = src.height();
  const int w = src.width();
  Image<float> out(src.channels(), h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector2d q = apply(back, Eigen::Vector2d(x, y));
      const double qx = std::clamp(q.x(), 0.0, w - 1.0);
      const double qy = std::clamp(q.y(), 0.0, h - 1.0);
      const int x0 = std::min(static_cast<int>(qx), w - 2 < 0 ? 0 : w - 2);
      const int y0 = std::min(static_cast<int>(qy), h - 2 < 0 ? 0 : h - 2);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = qx - x0;
      const double fy = qy - y0;
      for (int c = 0; c < src.channels(); ++c) {
        const double top = (1 - fx) * src(c, y0, x0) + fx * src(c, y0, x1);
        const double bottom = (1 - fx) * src(c, y1, x0) + fx * src(c, y1, x1);
        out(c, y, x) = static_cast<float>((1 - fy) * top + fy * bottom);
      }
    }
  }
  return out;
}

}  // namespace aurora
