#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ipf/config.hpp"

namespace ipf {

/// One row of the tracking report CSV.
struct FrameRecord {
    int frame = 0;
    RigidTransform origin;
    PoseVector pose;
    std::vector<Vec3> joints; // 19 world positions from the estimate
    double max_weight = 0.0;  // the estimate's normalized weight
    bool lost = false;
};

struct TrackReport {
    std::vector<FrameRecord> records;
};

/// CSV schema (bit-exact): header row; columns frame, origin_x, origin_y,
/// origin_z, origin_yaw, origin_pitch, origin_roll, dof_00..dof_30,
/// j00_x..j18_z, max_weight, lost; floats with 6 decimal places.
void write_report_csv(const TrackReport& report, const std::string& path);
TrackReport read_report_csv(const std::string& path);

/// Ground-truth pose/origin of one trajectory frame.
PoseVector trajectory_pose(const TrajectorySpec& trajectory, const SkeletonSpec& spec, int frame);
RigidTransform trajectory_origin(const TrajectorySpec& trajectory, int frame);

/// Renders the trajectory into per-camera silhouette sequences
/// (out_dir/cam<i>/<frame>.pgm) plus a ground-truth CSV (out_dir/truth.csv).
/// Rejects trajectories whose tracked DOFs move more than the interval
/// half-width between frames, naming the frame and DOF.
TrackReport generate_synthetic(const AppConfig& config, const std::string& out_dir);

/// Frame sequences indexed [camera][frame].
struct SequenceInput {
    std::vector<std::vector<BinaryImage>> silhouettes;

    int camera_count() const { return static_cast<int>(silhouettes.size()); }
    int frame_count() const { return silhouettes.empty() ? 0 : static_cast<int>(silhouettes[0].size()); }
    /// All cameras' masks for one frame, in camera order.
    std::vector<BinaryImage> frame(int k) const;

    void validate() const; // equal frame counts across cameras, nonempty
};

/// Sorted zero-padded frame files (.pgm/.png) of one directory.
std::vector<std::string> list_frame_files(const std::string& dir);

/// Loads silhouette masks from out_dir/cam<i>/ subdirectories (a flat
/// directory is accepted for a single camera).
SequenceInput load_silhouette_sequence(const std::string& dir, int camera_count);

/// Loads raw grayscale frames and segments them against cam<i>/background.*.
SequenceInput load_raw_sequence(const std::string& dir, int camera_count,
                                const SegmentationConfig& segmentation);

/// Full pipeline: initialize on frame 0, then per frame estimate the body
/// origin and run one filter step. Writes <out_dir>/track.csv unless
/// out_dir is empty. Per-frame wall time goes to `log` when given.
TrackReport run_tracker(const AppConfig& config, const SequenceInput& sequence,
                        const std::string& out_dir, std::ostream* log = nullptr);

struct EvalResult {
    std::vector<double> dof_mae_deg;                    // per DOF
    std::vector<double> joint_mean_err_m;               // per joint
    std::vector<std::vector<double>> frame_dof_abs_err; // [frame][dof], degrees
    std::vector<std::vector<double>> frame_joint_err;   // [frame][joint], meters
};

/// Compares a report against ground truth (frame counts must match).
/// Writes eval_summary.csv and eval_frames.csv unless out_dir is empty.
EvalResult evaluate(const TrackReport& estimate, const TrackReport& truth,
                    const std::string& out_dir);

/// Writes per-frame PGM images with the estimated model's mask boundary
/// (value 255) over the dimmed observation. One image per report record.
void render_overlay(const TrackReport& report, const std::vector<std::string>& frame_files,
                    const CameraModel& camera, const SkeletonSpec& spec,
                    const std::string& out_dir);

} // namespace ipf
