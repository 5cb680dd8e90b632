#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ipf/camera.hpp"
#include "ipf/filter.hpp"
#include "ipf/geometry.hpp"
#include "ipf/image.hpp"
#include "ipf/skeleton.hpp"

namespace ipf {

/// Exhaustive first-frame search grid: explicit value lists for a chosen
/// subset of DOFs (defaults elsewhere), crossed with candidate origins.
struct InitGrid {
    std::vector<std::pair<int, std::vector<double>>> dof_values; // (dof index, values)
    PoseVector defaults;                                         // values for all other DOFs
    std::vector<RigidTransform> origins;
    long budget = 200000; // hard cap on origins * pose-grid size

    long pose_grid_size() const;
    long total_size() const;
    void validate(const SkeletonSpec& spec) const; // throws, incl. budget check
};

struct InitResult {
    Particle best;          // weight normalized over the winning origin's grid
    RigidTransform origin;  // the winning origin
    std::vector<Particle> evaluated; // the winning origin's full grid, normalized
};

/// Builds per-origin weight functions; lets tests stub the likelihood.
using WeightFnFactory = std::function<WeightFn(const RigidTransform&)>;

/// Evaluates every configuration in origins x pose grid and returns the
/// argmax (ties toward the lowest enumeration index: origins outermost,
/// then the DOF lists in odometer order, last list fastest). The budget is
/// checked before any evaluation. Throws if every configuration scores zero.
InitResult initialize(const InitGrid& grid, const IntervalSpec& interval, const SkeletonSpec& spec,
                      const WeightFnFactory& factory);

/// Convenience overload wiring the silhouette likelihood.
InitResult initialize(const InitGrid& grid, const IntervalSpec& interval, const SkeletonSpec& spec,
                      const std::vector<BinaryImage>& silhouettes,
                      const std::vector<CameraModel>& cameras);

} // namespace ipf
