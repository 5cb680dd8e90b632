#include "ipf/init.hpp"

#include <unordered_set>

#include "ipf/error.hpp"
#include "ipf/likelihood.hpp"

namespace ipf {

long InitGrid::pose_grid_size() const {
    long n = 1;
    for (const auto& [dof, values] : dof_values)
        n *= static_cast<long>(values.size());
    return n;
}

long InitGrid::total_size() const {
    return static_cast<long>(origins.size()) * pose_grid_size();
}

void InitGrid::validate(const SkeletonSpec& spec) const {
    const auto& dofs = spec.dofs();
    if (defaults.angles_deg.size() != dofs.size())
        throw Error("init grid: defaults must cover all DOFs");
    if (origins.empty())
        throw Error("init grid: at least one candidate origin required");
    if (!validate_pose(spec, defaults).empty())
        throw Error("init grid: default pose violates joint limits");
    std::unordered_set<int> seen;
    for (const auto& [dof, values] : dof_values) {
        if (dof < 0 || dof >= static_cast<int>(dofs.size()))
            throw Error("init grid: DOF index out of range");
        if (!seen.insert(dof).second)
            throw Error("init grid: duplicate DOF in grid");
        if (values.empty())
            throw Error("init grid: empty value list for dof " + std::to_string(dof));
        for (double v : values)
            if (v < dofs[dof].limit_min_deg || v > dofs[dof].limit_max_deg)
                throw Error("init grid: value outside joint limits for dof " + std::to_string(dof));
    }
    if (total_size() > budget)
        throw Error("init grid: " + std::to_string(total_size()) +
                    " configurations exceed the budget of " + std::to_string(budget));
}

InitResult initialize(const InitGrid& grid, const IntervalSpec& interval, const SkeletonSpec& spec,
                      const WeightFnFactory& factory) {
    grid.validate(spec); // budget enforced before any evaluation
    const long pose_count = grid.pose_grid_size();

    const auto pose_at = [&](long index) {
        PoseVector pose = grid.defaults;
        long rem = index;
        for (std::size_t d = grid.dof_values.size(); d-- > 0;) { // last list fastest
            const auto& [dof, values] = grid.dof_values[d];
            pose.angles_deg[dof] = values[rem % values.size()];
            rem /= static_cast<long>(values.size());
        }
        return pose;
    };

    std::vector<double> weights(pose_count);
    double best_weight = 0.0;
    long best_pose = -1;
    int best_origin = -1;
    std::vector<double> best_weights;

    for (std::size_t oi = 0; oi < grid.origins.size(); ++oi) {
        const WeightFn fn = factory(grid.origins[oi]);
        const long n = pose_count;
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            weights[i] = fn(pose_at(i));
        for (long i = 0; i < n; ++i) {
            if (weights[i] > best_weight) {
                best_weight = weights[i];
                best_pose = i;
                best_origin = static_cast<int>(oi);
            }
        }
        if (best_origin == static_cast<int>(oi))
            best_weights = weights;
    }

    if (best_pose < 0)
        throw Error("initialization failed: every grid configuration scored zero");

    double total = 0.0;
    for (double w : best_weights)
        total += w;

    InitResult result;
    result.origin = grid.origins[best_origin];
    result.evaluated.reserve(pose_count);
    for (long i = 0; i < pose_count; ++i)
        result.evaluated.push_back(split_pose(pose_at(i), interval, best_weights[i] / total));
    result.best = result.evaluated[best_pose];
    return result;
}

InitResult initialize(const InitGrid& grid, const IntervalSpec& interval, const SkeletonSpec& spec,
                      const std::vector<BinaryImage>& silhouettes,
                      const std::vector<CameraModel>& cameras) {
    return initialize(grid, interval, spec, [&](const RigidTransform& origin) -> WeightFn {
        return SilhouetteWeight(spec, cameras, silhouettes, origin);
    });
}

} // namespace ipf
