#pragma once
// Small fixed-size linear algebra aliases shared by every module.

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace hopf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Complex = std::complex<double>;

/// Two-component complex field value (z1, z2).
using Spinor = Eigen::Vector2cd;

/// Three tangent vectors at a point of S3, stored as columns.
using Frame4 = Eigen::Matrix<double, 4, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Volume of the unit 3-sphere.
inline constexpr double kS3Volume = 2.0 * std::numbers::pi * std::numbers::pi;

}  // namespace hopf
