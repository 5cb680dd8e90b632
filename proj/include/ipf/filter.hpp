#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ipf/camera.hpp"
#include "ipf/rng.hpp"
#include "ipf/skeleton.hpp"

namespace ipf {

/// One candidate body configuration, split into the tracked part L
/// (grid-expanded by prediction) and the remainder R (noise-perturbed).
struct Particle {
    std::vector<double> tracked;
    std::vector<double> rest;
    double weight = 0.0;
};

/// The multidimensional interval the tracked DOFs are expanded over: each
/// tracked dimension gets q evenly spaced values across +-half_width around
/// the particle's current value. q is odd so the current value itself is on
/// the grid.
struct IntervalSpec {
    std::vector<int> tracked_dofs;        // indices into the DOF table, distinct
    std::vector<double> half_width_deg;   // one per tracked DOF, > 0
    std::vector<int> q;                   // one per tracked DOF, odd, >= 3

    void validate(int dof_count) const;   // throws on a bad spec
    long grid_size() const;               // product of q
};

enum class Algorithm { kIpf, kCondensation };

struct TrackerConfig {
    int survivors = 1;                 // M distinct particles kept at selection
    IntervalSpec interval;
    double rest_noise_sigma_deg = 2.0; // white noise applied to R per step
    std::uint64_t rng_seed = 0;
    Algorithm algorithm = Algorithm::kIpf;
    double condensation_noise_sigma_deg = 3.0; // noise on all DOFs in the baseline
    long condensation_particles = 0;           // 0 -> survivors * grid_size

    void validate(int dof_count) const;
    long particles_per_step() const { return survivors * interval.grid_size(); }
    long condensation_count() const {
        return condensation_particles > 0 ? condensation_particles : particles_per_step();
    }
};

/// Likelihood of a full pose; must be pure and thread-safe.
using WeightFn = std::function<double(const PoseVector&)>;

/// Reassembles the full 31-DOF pose from a particle's L/R split.
PoseVector assemble_pose(const Particle& particle, const IntervalSpec& interval, int dof_count);
/// Splits a full pose into a particle (tracked indices in interval order,
/// the rest in ascending DOF order).
Particle split_pose(const PoseVector& pose, const IntervalSpec& interval, double weight = 0.0);

bool same_state(const Particle& a, const Particle& b);

/// The M distinct heaviest particles. Every returned weight is >= every
/// non-returned distinct state's weight; ties break toward the lowest input
/// index. Throws if fewer than M distinct states exist.
std::vector<Particle> ipf_select(const std::vector<Particle>& particles, int m);

/// Deterministic interval expansion: the full Cartesian grid over the
/// tracked DOFs (odometer order, last dimension fastest) with fresh white
/// Gaussian noise on R per output, everything clamped to joint limits.
/// Output size is exactly grid_size().
std::vector<Particle> ipf_predict(const Particle& particle, const IntervalSpec& interval,
                                  double rest_noise_sigma_deg, const SkeletonSpec& spec,
                                  const RngStream& stream);

struct MeasureResult {
    std::vector<Particle> particles; // weights normalized to sum 1
    int estimate_index = -1;         // argmax weight, ties toward lowest index
    bool all_zero_weights = false;   // raw weights were all zero (track loss)
};

/// Weights every particle, normalizes, and picks the estimate. Evaluations
/// run in parallel; results are independent of thread count.
MeasureResult ipf_measure(std::vector<Particle> particles, const WeightFn& weight_fn,
                          const IntervalSpec& interval, int dof_count);

/// Convenience overload wiring the silhouette likelihood.
MeasureResult ipf_measure(std::vector<Particle> particles,
                          const std::vector<BinaryImage>& silhouettes,
                          const std::vector<CameraModel>& cameras, const SkeletonSpec& spec,
                          const RigidTransform& origin, const IntervalSpec& interval);

struct StepResult {
    std::vector<Particle> particles;
    int estimate_index = -1;
    Particle estimate;
    bool all_zero_weights = false;
};

/// One tracking step: select M -> predict M * grid_size() -> measure, in
/// that order, exactly once.
StepResult ipf_step(const std::vector<Particle>& previous, const WeightFn& weight_fn,
                    const TrackerConfig& config, const SkeletonSpec& spec, std::uint64_t frame);

/// Multinomial resampling: `draws` indices picked with replacement with
/// probability proportional to the weights.
std::vector<int> multinomial_resample(const std::vector<double>& weights, int draws,
                                      std::mt19937_64& engine);

/// Condensation baseline: select with replacement proportional to weight,
/// identity evolution plus white Gaussian noise on all DOFs, then measure.
StepResult condensation_step(const std::vector<Particle>& previous, const WeightFn& weight_fn,
                             const TrackerConfig& config, const SkeletonSpec& spec,
                             std::uint64_t frame);

} // namespace ipf
