#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "aurora/image.hpp"

namespace aurora {

/// 2x3 affine map p' = A p + t acting on pixel coordinates (x, y).
using Affine2 = Eigen::Matrix<double, 2, 3>;

Affine2 identity_affine();
/// Rotation by `degrees` about `centre` followed by translation (tx, ty).
Affine2 rigid_affine(double degrees, const Eigen::Vector2d& centre, const Eigen::Vector2d& shift);
Eigen::Vector2d apply(const Affine2& a, const Eigen::Vector2d& p);
/// (outer ∘ inner)(p) = outer(inner(p))
Affine2 compose(const Affine2& outer, const Affine2& inner);
/// Throws ValidationError when the linear part is singular.
Affine2 invert(const Affine2& a);
double determinant(const Affine2& a);

/// Resamples `src` so that out(p) = src(a^-1 p), bilinear, edge-clamped.
Image<float> warp_image(const Image<float>& src, const Affine2& a);

}  // namespace aurora
