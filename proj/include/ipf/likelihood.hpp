#pragma once

#include <vector>

#include "ipf/camera.hpp"
#include "ipf/image.hpp"
#include "ipf/skeleton.hpp"

namespace ipf {

/// Pixel overlap between the silhouette observation and a rendered model mask.
struct OverlapCounts {
    long n_common = 0;          // foreground in both
    long n_silhouette_only = 0; // silhouette foreground not covered by the model
    long n_model_only = 0;      // model foreground outside the silhouette
};

/// Exact set cardinalities; images must have identical dimensions.
OverlapCounts overlap_counts(const BinaryImage& silhouette, const BinaryImage& synthetic);

/// w = Nc / (Ns + Nm). The degenerate denominator uses max(1, Ns + Nm) so a
/// perfect match keeps a finite score above every imperfect one; two empty
/// masks score 0.
double weight(const OverlapCounts& counts);

/// Arithmetic mean of per-camera weights; the list must be nonempty.
double multi_camera_weight(const std::vector<double>& per_camera_weights);

/// Everything a particle weight needs for one frame, bound together:
/// FK -> flesh -> rasterize per camera -> averaged overlap weight.
/// Holds references only; callers keep the inputs alive. Pure and
/// thread-safe, intended for concurrent evaluation of many particles.
class SilhouetteWeight {
public:
    SilhouetteWeight(const SkeletonSpec& spec, const std::vector<CameraModel>& cameras,
                     const std::vector<BinaryImage>& silhouettes, const RigidTransform& origin);

    double operator()(const PoseVector& pose) const;

private:
    const SkeletonSpec& spec_;
    const std::vector<CameraModel>& cameras_;
    const std::vector<BinaryImage>& silhouettes_;
    RigidTransform origin_;
};

} // namespace ipf
