#pragma once

#include <Eigen/Core>

namespace ipf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle into [-180, 180).
double wrap_degrees(double deg);

Mat3 rotation_x(double deg);
Mat3 rotation_y(double deg);
Mat3 rotation_z(double deg);

/// Fixed Euler convention used everywhere: R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 euler_zyx(double yaw_deg, double pitch_deg, double roll_deg);

/// Rigid transform: p_out = rotation() * p_in + position.
/// Used both as a body pose (local -> world) and as a camera extrinsic
/// (world -> camera), depending on context.
struct RigidTransform {
    Vec3 position = Vec3::Zero();
    double yaw_deg = 0.0;   // about z
    double pitch_deg = 0.0; // about y
    double roll_deg = 0.0;  // about x

    Mat3 rotation() const { return euler_zyx(yaw_deg, pitch_deg, roll_deg); }
    Vec3 apply(const Vec3& p) const { return rotation() * p + position; }

    /// Wraps all three angles into [-180, 180).
    void normalize_angles();
};

} // namespace ipf
