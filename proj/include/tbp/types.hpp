#pragma once

#include <Eigen/Dense>

namespace tbp {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Box2 = Eigen::AlignedBox2d;

} // namespace tbp
