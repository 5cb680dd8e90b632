#pragma once

#include "ipf/geometry.hpp"
#include "ipf/image.hpp"
#include "ipf/skeleton.hpp"

namespace ipf {

/// Pinhole camera. The extrinsic maps world to camera coordinates; the
/// camera looks along +z and image y grows downward. Pixel (x, y) is
/// sampled at its center (x + 0.5, y + 0.5).
struct CameraModel {
    double focal_px = 1.0;
    double principal_x = 0.0;
    double principal_y = 0.0;
    RigidTransform extrinsic; // world -> camera
    int width = 0;
    int height = 0;

    void validate() const; // throws on bad focal/resolution/principal point
};

/// Perspective projection result; `visible` is false at or behind the
/// camera plane (such points are never silently projected).
struct Projection {
    bool visible = false;
    double u = 0.0;
    double v = 0.0;
};

Projection project_point(const CameraModel& camera, const Vec3& world_point);

/// Binary footprint of the fleshed body: pixel = 1 iff the pixel-center ray
/// intersects any capsule in front of the camera. Per-pixel ray-capsule
/// distance test, restricted to a conservative bounding box per capsule;
/// capsule segments straddling the camera plane are clipped to positive depth.
BinaryImage rasterize(const CameraModel& camera, const BodyVolume& body);

} // namespace ipf
