#include "ipf/camera.hpp"

#include <algorithm>
#include <cmath>

#include "ipf/error.hpp"

namespace ipf {

void CameraModel::validate() const {
    if (!(focal_px > 0.0))
        throw Error("camera focal length must be positive");
    if (width <= 0 || height <= 0)
        throw Error("camera resolution must be positive");
    if (principal_x < 0.0 || principal_x > width || principal_y < 0.0 || principal_y > height)
        throw Error("camera principal point must lie inside the image bounds");
}

Projection project_point(const CameraModel& camera, const Vec3& world_point) {
    const Vec3 p = camera.extrinsic.apply(world_point);
    if (p.z() <= 0.0)
        return {false, 0.0, 0.0};
    return {true, camera.focal_px * p.x() / p.z() + camera.principal_x,
            camera.focal_px * p.y() / p.z() + camera.principal_y};
}

namespace {

constexpr double kNearPlane = 1e-3; // meters

struct PixelSpan {
    int x0, x1, y0, y1;
    bool empty;
};

// Conservative image-space bounds of a capsule via interval arithmetic on
// x/z and y/z. Assumes both endpoints have z >= kNearPlane (pre-clipped).
PixelSpan capsule_span(const CameraModel& cam, const Vec3& a, const Vec3& b, double r) {
    const double zlo = std::min(a.z(), b.z()) - r;
    if (zlo <= 0.0)
        return {0, cam.width - 1, 0, cam.height - 1, false}; // too close to bound; scan everything
    const double zhi = std::max(a.z(), b.z()) + r;

    const auto ratio_bounds = [&](double lo, double hi, double& out_lo, double& out_hi) {
        out_lo = lo / (lo > 0.0 ? zhi : zlo);
        out_hi = hi / (hi > 0.0 ? zlo : zhi);
    };
    double xr_lo, xr_hi, yr_lo, yr_hi;
    ratio_bounds(std::min(a.x(), b.x()) - r, std::max(a.x(), b.x()) + r, xr_lo, xr_hi);
    ratio_bounds(std::min(a.y(), b.y()) - r, std::max(a.y(), b.y()) + r, yr_lo, yr_hi);

    const double u0 = cam.focal_px * xr_lo + cam.principal_x;
    const double u1 = cam.focal_px * xr_hi + cam.principal_x;
    const double v0 = cam.focal_px * yr_lo + cam.principal_y;
    const double v1 = cam.focal_px * yr_hi + cam.principal_y;

    PixelSpan s;
    s.x0 = std::max(0, static_cast<int>(std::floor(u0 - 0.5)) - 1);
    s.x1 = std::min(cam.width - 1, static_cast<int>(std::ceil(u1 - 0.5)) + 1);
    s.y0 = std::max(0, static_cast<int>(std::floor(v0 - 0.5)) - 1);
    s.y1 = std::min(cam.height - 1, static_cast<int>(std::ceil(v1 - 0.5)) + 1);
    s.empty = s.x0 > s.x1 || s.y0 > s.y1;
    return s;
}

// Squared distance from the ray {t*d : t >= 0} (origin at the camera center)
// to the segment a + s*(b-a), s in [0,1].
inline double ray_segment_dist2(const Vec3& a, const Vec3& e, double ee, double ae,
                                const Vec3& d, double dd, double ad, double ed) {
    double s;
    const double denom = dd * ee - ed * ed;
    if (denom > 1e-300) {
        s = std::clamp((ad * ed - ae * dd) / denom, 0.0, 1.0);
    } else {
        s = 0.0; // degenerate segment or parallel lines
    }
    double t = (ad + s * ed) / dd;
    if (t < 0.0) {
        t = 0.0;
        if (ee > 1e-300)
            s = std::clamp(-ae / ee, 0.0, 1.0);
    }
    const Vec3 diff = a + s * e - t * d;
    return diff.squaredNorm();
}

} // namespace

BinaryImage rasterize(const CameraModel& camera, const BodyVolume& body) {
    camera.validate();
    BinaryImage mask(camera.width, camera.height);
    const Mat3 rot = camera.extrinsic.rotation();
    const Vec3 trans = camera.extrinsic.position;

    for (const auto& capsule : body.capsules) {
        Vec3 a = rot * capsule.a + trans;
        Vec3 b = rot * capsule.b + trans;
        const double r = capsule.radius_m;

        // Clip the segment to the positive-depth half-space.
        if (a.z() < kNearPlane && b.z() < kNearPlane)
            continue;
        if (a.z() < kNearPlane || b.z() < kNearPlane) {
            const double t = (kNearPlane - a.z()) / (b.z() - a.z());
            const Vec3 cut = a + t * (b - a);
            if (a.z() < kNearPlane)
                a = cut;
            else
                b = cut;
        }

        const PixelSpan span = capsule_span(camera, a, b, r);
        if (span.empty)
            continue;

        const Vec3 e = b - a;
        const double ee = e.squaredNorm();
        const double ae = a.dot(e);
        const double r2 = r * r;
        const double f = camera.focal_px;

        for (int y = span.y0; y <= span.y1; ++y) {
            const double vy = y + 0.5 - camera.principal_y;
            // Per-row constants; d = (ux, vy, f) with ux varying along the row.
            const double row_dd = vy * vy + f * f;
            const double row_ad = a.y() * vy + a.z() * f;
            const double row_ed = e.y() * vy + e.z() * f;
            for (int x = span.x0; x <= span.x1; ++x) {
                if (mask.get(x, y))
                    continue;
                const double ux = x + 0.5 - camera.principal_x;
                const double dd = ux * ux + row_dd;
                const double ad = a.x() * ux + row_ad;
                const double ed = e.x() * ux + row_ed;
                if (ray_segment_dist2(a, e, ee, ae, Vec3(ux, vy, f), dd, ad, ed) <= r2)
                    mask.set(x, y);
            }
        }
    }
    return mask;
}

} // namespace ipf
