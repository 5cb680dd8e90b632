#include "ipf/geometry.hpp"

#include <cmath>

namespace ipf {

double wrap_degrees(double deg) {
    double w = std::fmod(deg + 180.0, 360.0);
    if (w < 0.0)
        w += 360.0;
    return w - 180.0;
}

Mat3 rotation_x(double deg) {
    const double c = std::cos(deg_to_rad(deg));
    const double s = std::sin(deg_to_rad(deg));
    Mat3 r;
    r << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return r;
}

Mat3 rotation_y(double deg) {
    const double c = std::cos(deg_to_rad(deg));
    const double s = std::sin(deg_to_rad(deg));
    Mat3 r;
    r << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return r;
}

Mat3 rotation_z(double deg) {
    const double c = std::cos(deg_to_rad(deg));
    const double s = std::sin(deg_to_rad(deg));
    Mat3 r;
    r << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return r;
}

Mat3 euler_zyx(double yaw_deg, double pitch_deg, double roll_deg) {
    return rotation_z(yaw_deg) * rotation_y(pitch_deg) * rotation_x(roll_deg);
}

void RigidTransform::normalize_angles() {
    yaw_deg = wrap_degrees(yaw_deg);
    pitch_deg = wrap_degrees(pitch_deg);
    roll_deg = wrap_degrees(roll_deg);
}

} // namespace ipf
