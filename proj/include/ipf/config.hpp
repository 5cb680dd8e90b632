#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ipf/camera.hpp"
#include "ipf/filter.hpp"
#include "ipf/init.hpp"
#include "ipf/origin_search.hpp"
#include "ipf/skeleton.hpp"

namespace ipf {

struct SegmentationConfig {
    int threshold = 25;
    bool open_close = false; // optional morphological cleanup pass
};

/// Per-DOF waveform driving the synthetic trajectory.
struct Waveform {
    enum class Type { kConstant, kSinusoid } type = Type::kConstant;
    double value = 0.0;      // constant
    double center_deg = 0.0; // sinusoid: center + amplitude * sin(2*pi*t/period + phase)
    double amplitude_deg = 0.0;
    double period_s = 1.0;
    double phase_deg = 0.0;

    double sample(double t_seconds) const;
};

struct OriginWaypoint {
    double time_s = 0.0;
    RigidTransform origin;
};

struct TrajectorySpec {
    double duration_s = 5.0;
    double fps = 20.0;
    std::vector<std::pair<int, Waveform>> dof_motion; // (dof index, waveform)
    std::vector<OriginWaypoint> origin_path;          // piecewise linear, sorted by time

    int frame_count() const;
    double frame_time(int frame) const { return frame / fps; }
};

/// Whole-application configuration; one file shared by all modules.
struct AppConfig {
    SkeletonSpec skeleton;
    std::vector<CameraModel> cameras;
    TrackerConfig tracker;
    OriginSearchSpec origin_search;
    InitGrid init;
    SegmentationConfig segmentation;
    TrajectorySpec trajectory;

    void validate() const;
};

/// Loads and validates a config file. The seed is taken from the config,
/// overridden by the IPF_SEED environment variable if set, overridden in
/// turn by `seed_override` (the CLI flag).
AppConfig load_config(const std::string& path,
                      std::optional<std::uint64_t> seed_override = std::nullopt);

} // namespace ipf
