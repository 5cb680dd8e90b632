#include "ipf/origin_search.hpp"

#include <cmath>

#include "ipf/error.hpp"
#include "ipf/likelihood.hpp"

namespace ipf {

void OriginSearchSpec::validate() const {
    if (!(position_range_m > 0.0) || !(position_step_m > 0.0))
        throw Error("origin search: position range and step must be positive");
    if (!(rotation_range_deg > 0.0) || !(rotation_step_deg > 0.0))
        throw Error("origin search: rotation range and step must be positive");
    if (passes < 1)
        throw Error("origin search: passes must be >= 1");
}

namespace {

double& dimension_ref(RigidTransform& t, int dim) {
    switch (dim) {
    case 0: return t.position.x();
    case 1: return t.position.y();
    case 2: return t.position.z();
    case 3: return t.yaw_deg;
    case 4: return t.pitch_deg;
    default: return t.roll_deg;
    }
}

} // namespace

OriginEstimate estimate_origin(const PoseVector& prev_pose, const RigidTransform& prev_origin,
                               const std::vector<BinaryImage>& silhouettes,
                               const std::vector<CameraModel>& cameras, const SkeletonSpec& spec,
                               const OriginSearchSpec& search) {
    search.validate();
    const auto score = [&](const RigidTransform& origin) {
        return SilhouetteWeight(spec, cameras, silhouettes, origin)(prev_pose);
    };

    RigidTransform current = prev_origin;
    double current_weight = score(current);

    for (int pass = 0; pass < search.passes; ++pass) {
        for (int dim = 0; dim < 6; ++dim) {
            const bool rotational = dim >= 3;
            const double step = rotational ? search.rotation_step_deg : search.position_step_m;
            const double range = rotational ? search.rotation_range_deg : search.position_range_m;
            const int steps = static_cast<int>(std::floor(range / step + 1e-9));
            if (steps < 1)
                continue;

            std::vector<double> scores(2 * steps + 1, 0.0);
#pragma omp parallel for schedule(static)
            for (int i = 0; i < 2 * steps + 1; ++i) {
                const int k = i - steps;
                if (k == 0)
                    continue; // the current value is already scored
                RigidTransform candidate = current;
                dimension_ref(candidate, dim) += k * step;
                if (rotational)
                    candidate.normalize_angles();
                scores[i] = score(candidate);
            }

            int best_k = 0;
            double best = current_weight;
            for (int i = 0; i < 2 * steps + 1; ++i) {
                const int k = i - steps;
                if (k != 0 && scores[i] > best) {
                    best = scores[i];
                    best_k = k;
                }
            }
            if (best_k != 0) {
                dimension_ref(current, dim) += best_k * step;
                if (rotational)
                    current.normalize_angles();
                current_weight = best;
            }
        }
    }

    if (current_weight <= 0.0)
        return {prev_origin, 0.0, true};
    return {current, current_weight, false};
}

} // namespace ipf
