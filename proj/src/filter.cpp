#include "ipf/filter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "ipf/error.hpp"
#include "ipf/likelihood.hpp"

namespace ipf {

void IntervalSpec::validate(int dof_count) const {
    if (tracked_dofs.empty())
        throw Error("interval: at least one tracked DOF required");
    if (half_width_deg.size() != tracked_dofs.size() || q.size() != tracked_dofs.size())
        throw Error("interval: half_width and q must match the tracked DOF count");
    std::unordered_set<int> seen;
    for (int d : tracked_dofs) {
        if (d < 0 || d >= dof_count)
            throw Error("interval: tracked DOF index " + std::to_string(d) + " out of range");
        if (!seen.insert(d).second)
            throw Error("interval: tracked DOF indices must be distinct");
    }
    for (double hw : half_width_deg)
        if (!(hw > 0.0))
            throw Error("interval: half_width must be positive");
    for (int qi : q)
        if (qi < 3 || qi % 2 == 0)
            throw Error("interval: q must be an odd integer >= 3");
}

long IntervalSpec::grid_size() const {
    long n = 1;
    for (int qi : q)
        n *= qi;
    return n;
}

void TrackerConfig::validate(int dof_count) const {
    if (survivors < 1)
        throw Error("tracker: survivor count M must be >= 1");
    interval.validate(dof_count);
    if (rest_noise_sigma_deg < 0.0)
        throw Error("tracker: rest noise sigma must be nonnegative");
    if (condensation_noise_sigma_deg < 0.0)
        throw Error("tracker: condensation noise sigma must be nonnegative");
    if (condensation_particles < 0)
        throw Error("tracker: condensation particle count must be nonnegative");
}

PoseVector assemble_pose(const Particle& particle, const IntervalSpec& interval, int dof_count) {
    PoseVector pose{std::vector<double>(dof_count, 0.0)};
    std::vector<bool> is_tracked(dof_count, false);
    for (std::size_t i = 0; i < interval.tracked_dofs.size(); ++i) {
        pose.angles_deg[interval.tracked_dofs[i]] = particle.tracked[i];
        is_tracked[interval.tracked_dofs[i]] = true;
    }
    std::size_t r = 0;
    for (int d = 0; d < dof_count; ++d)
        if (!is_tracked[d])
            pose.angles_deg[d] = particle.rest[r++];
    return pose;
}

Particle split_pose(const PoseVector& pose, const IntervalSpec& interval, double weight) {
    const int dof_count = static_cast<int>(pose.angles_deg.size());
    Particle p;
    p.weight = weight;
    p.tracked.reserve(interval.tracked_dofs.size());
    std::vector<bool> is_tracked(dof_count, false);
    for (int d : interval.tracked_dofs) {
        p.tracked.push_back(pose.angles_deg[d]);
        is_tracked[d] = true;
    }
    p.rest.reserve(dof_count - interval.tracked_dofs.size());
    for (int d = 0; d < dof_count; ++d)
        if (!is_tracked[d])
            p.rest.push_back(pose.angles_deg[d]);
    return p;
}

bool same_state(const Particle& a, const Particle& b) {
    return a.tracked == b.tracked && a.rest == b.rest;
}

namespace {

std::uint64_t state_hash(const Particle& p) {
    std::uint64_t h = 0x7c9a3f51u;
    const auto mix_value = [&h](double v) {
        if (v == 0.0)
            v = 0.0; // fold -0.0 onto +0.0 so hashing matches numeric equality
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
    };
    for (double v : p.tracked)
        mix_value(v);
    for (double v : p.rest)
        mix_value(v);
    return h;
}

// Neumaier-compensated sum; keeps normalization residuals well below 1e-12.
double stable_sum(const std::vector<double>& values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace

std::vector<Particle> ipf_select(const std::vector<Particle>& particles, int m) {
    if (m < 1)
        throw Error("ipf_select: M must be >= 1");
    std::vector<int> order(particles.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return particles[lhs].weight > particles[rhs].weight;
    });

    struct Ref {
        const Particle* p;
        std::uint64_t hash;
        bool operator==(const Ref& other) const { return same_state(*p, *other.p); }
    };
    struct RefHash {
        std::size_t operator()(const Ref& r) const { return r.hash; }
    };
    std::unordered_set<Ref, RefHash> seen;
    seen.reserve(static_cast<std::size_t>(m) * 2);

    std::vector<Particle> selected;
    selected.reserve(m);
    for (int idx : order) {
        const Particle& p = particles[idx];
        if (seen.insert(Ref{&p, state_hash(p)}).second) {
            selected.push_back(p);
            if (static_cast<int>(selected.size()) == m)
                return selected;
        }
    }
    throw Error("ipf_select: particle set holds fewer than M = " + std::to_string(m) +
                " distinct states (degenerate set)");
}

std::vector<Particle> ipf_predict(const Particle& particle, const IntervalSpec& interval,
                                  double rest_noise_sigma_deg, const SkeletonSpec& spec,
                                  const RngStream& stream) {
    const std::size_t n = interval.tracked_dofs.size();
    const long total = interval.grid_size();

    // Limits for the tracked part in interval order, and for the rest part
    // in ascending DOF order.
    const auto& dofs = spec.dofs();
    std::vector<bool> is_tracked(dofs.size(), false);
    for (int d : interval.tracked_dofs)
        is_tracked[d] = true;
    std::vector<const DofSpec*> rest_dofs;
    rest_dofs.reserve(dofs.size() - n);
    for (std::size_t d = 0; d < dofs.size(); ++d)
        if (!is_tracked[d])
            rest_dofs.push_back(&dofs[d]);

    std::vector<Particle> out;
    out.reserve(total);
    for (long idx = 0; idx < total; ++idx) {
        Particle p;
        p.weight = 0.0;
        p.tracked.resize(n);
        long rem = idx;
        for (std::size_t d = n; d-- > 0;) { // last dimension varies fastest
            const int qi = interval.q[d];
            const int digit = static_cast<int>(rem % qi);
            rem /= qi;
            const double hw = interval.half_width_deg[d];
            const double value = particle.tracked[d] - hw + digit * (2.0 * hw / (qi - 1));
            const DofSpec& dof = dofs[interval.tracked_dofs[d]];
            p.tracked[d] = std::clamp(value, dof.limit_min_deg, dof.limit_max_deg);
        }
        p.rest = particle.rest;
        if (rest_noise_sigma_deg > 0.0) {
            auto engine = stream.engine(kStreamPredict, static_cast<std::uint64_t>(idx));
            std::normal_distribution<double> noise(0.0, rest_noise_sigma_deg);
            for (std::size_t r = 0; r < p.rest.size(); ++r)
                p.rest[r] = std::clamp(p.rest[r] + noise(engine), rest_dofs[r]->limit_min_deg,
                                       rest_dofs[r]->limit_max_deg);
        } else {
            for (std::size_t r = 0; r < p.rest.size(); ++r)
                p.rest[r] = std::clamp(p.rest[r], rest_dofs[r]->limit_min_deg,
                                       rest_dofs[r]->limit_max_deg);
        }
        out.push_back(std::move(p));
    }
    return out;
}

MeasureResult ipf_measure(std::vector<Particle> particles, const WeightFn& weight_fn,
                          const IntervalSpec& interval, int dof_count) {
    if (particles.empty())
        throw Error("ipf_measure: empty particle set");
    const int n = static_cast<int>(particles.size());
    std::vector<double> raw(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        raw[i] = weight_fn(assemble_pose(particles[i], interval, dof_count));

    MeasureResult result;
    const double total = stable_sum(raw);
    if (total <= 0.0) {
        result.all_zero_weights = true;
        const double uniform = 1.0 / n;
        for (int i = 0; i < n; ++i)
            particles[i].weight = uniform;
        result.estimate_index = 0;
    } else {
        int best = 0;
        for (int i = 0; i < n; ++i) {
            particles[i].weight = raw[i] / total;
            if (raw[i] > raw[best])
                best = i;
        }
        result.estimate_index = best;
    }
    result.particles = std::move(particles);
    return result;
}

MeasureResult ipf_measure(std::vector<Particle> particles,
                          const std::vector<BinaryImage>& silhouettes,
                          const std::vector<CameraModel>& cameras, const SkeletonSpec& spec,
                          const RigidTransform& origin, const IntervalSpec& interval) {
    const SilhouetteWeight fn(spec, cameras, silhouettes, origin);
    return ipf_measure(std::move(particles), std::cref(fn), interval,
                       static_cast<int>(spec.dofs().size()));
}

StepResult ipf_step(const std::vector<Particle>& previous, const WeightFn& weight_fn,
                    const TrackerConfig& config, const SkeletonSpec& spec, std::uint64_t frame) {
    const int dof_count = static_cast<int>(spec.dofs().size());
    config.validate(dof_count);

    const std::vector<Particle> survivors = ipf_select(previous, config.survivors);
    const long grid = config.interval.grid_size();

    std::vector<Particle> expanded;
    expanded.reserve(survivors.size() * grid);
    for (std::size_t s = 0; s < survivors.size(); ++s) {
        RngStream stream{config.rng_seed, frame, static_cast<std::uint64_t>(s) * grid};
        auto block = ipf_predict(survivors[s], config.interval, config.rest_noise_sigma_deg, spec,
                                 stream);
        std::move(block.begin(), block.end(), std::back_inserter(expanded));
    }

    MeasureResult measured = ipf_measure(std::move(expanded), weight_fn, config.interval, dof_count);
    StepResult result;
    result.estimate_index = measured.estimate_index;
    result.estimate = measured.particles[measured.estimate_index];
    result.all_zero_weights = measured.all_zero_weights;
    result.particles = std::move(measured.particles);
    return result;
}

std::vector<int> multinomial_resample(const std::vector<double>& weights, int draws,
                                      std::mt19937_64& engine) {
    if (weights.empty())
        throw Error("multinomial_resample: empty weight vector");
    std::vector<double> cumulative(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0)
            throw Error("multinomial_resample: negative weight");
        acc += weights[i];
        cumulative[i] = acc;
    }
    if (acc <= 0.0)
        throw Error("multinomial_resample: all weights zero");
    std::uniform_real_distribution<double> uniform(0.0, acc);
    std::vector<int> picks(draws);
    for (int k = 0; k < draws; ++k) {
        const double u = uniform(engine);
        picks[k] = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                    cumulative.begin());
        if (picks[k] == static_cast<int>(weights.size()))
            --picks[k]; // u == acc edge
    }
    return picks;
}

StepResult condensation_step(const std::vector<Particle>& previous, const WeightFn& weight_fn,
                             const TrackerConfig& config, const SkeletonSpec& spec,
                             std::uint64_t frame) {
    if (previous.empty())
        throw Error("condensation_step: empty particle set");
    const int dof_count = static_cast<int>(spec.dofs().size());
    config.validate(dof_count);
    const int draws = static_cast<int>(config.condensation_count());

    std::vector<double> weights(previous.size());
    bool degenerate_input = true;
    for (std::size_t i = 0; i < previous.size(); ++i) {
        weights[i] = previous[i].weight;
        degenerate_input = degenerate_input && !(weights[i] > 0.0);
    }
    if (degenerate_input)
        std::fill(weights.begin(), weights.end(), 1.0); // uniform fallback, flagged below

    auto resample_engine = stream_engine(config.rng_seed, kStreamResample, frame, 0);
    const std::vector<int> picks = multinomial_resample(weights, draws, resample_engine);

    const auto& dofs = spec.dofs();
    std::vector<Particle> moved(draws);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < draws; ++k) {
        PoseVector pose = assemble_pose(previous[picks[k]], config.interval, dof_count);
        if (config.condensation_noise_sigma_deg > 0.0) {
            auto engine = stream_engine(config.rng_seed, kStreamPredict, frame,
                                        static_cast<std::uint64_t>(k));
            std::normal_distribution<double> noise(0.0, config.condensation_noise_sigma_deg);
            for (std::size_t d = 0; d < pose.angles_deg.size(); ++d)
                pose.angles_deg[d] = std::clamp(pose.angles_deg[d] + noise(engine),
                                                dofs[d].limit_min_deg, dofs[d].limit_max_deg);
        }
        moved[k] = split_pose(pose, config.interval);
    }

    MeasureResult measured = ipf_measure(std::move(moved), weight_fn, config.interval, dof_count);
    StepResult result;
    result.estimate_index = measured.estimate_index;
    result.estimate = measured.particles[measured.estimate_index];
    result.all_zero_weights = measured.all_zero_weights || degenerate_input;
    result.particles = std::move(measured.particles);
    return result;
}

} // namespace ipf
