#pragma once

#include <vector>

#include "ipf/camera.hpp"
#include "ipf/geometry.hpp"
#include "ipf/image.hpp"
#include "ipf/skeleton.hpp"

namespace ipf {

/// Per-dimension grid for the body-origin search.
struct OriginSearchSpec {
    double position_range_m = 0.3;
    double position_step_m = 0.05;
    double rotation_range_deg = 15.0;
    double rotation_step_deg = 5.0;
    int passes = 1; // coordinate-descent sweeps over the 6 dimensions

    void validate() const;
};

struct OriginEstimate {
    RigidTransform origin;
    double weight = 0.0;
    bool lost = false; // every candidate scored zero; origin carried over
};

/// Coordinate descent over the 6 origin dimensions in the fixed order
/// x, y, z, yaw, pitch, roll: each dimension scans all grid values within
/// +-range of the current value (pose held at prev_pose) and fixes the
/// argmax before moving on. A dimension keeps its current value unless a
/// candidate scores strictly higher, so the objective never decreases.
OriginEstimate estimate_origin(const PoseVector& prev_pose, const RigidTransform& prev_origin,
                               const std::vector<BinaryImage>& silhouettes,
                               const std::vector<CameraModel>& cameras, const SkeletonSpec& spec,
                               const OriginSearchSpec& search);

} // namespace ipf
