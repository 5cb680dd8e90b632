#include "ipf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ipf/error.hpp"
#include "ipf/likelihood.hpp"
#include "ipf/origin_search.hpp"
#include "ipf/segmentation.hpp"

namespace fs = std::filesystem;

namespace ipf {

namespace {

std::string format_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string csv_header() {
    std::ostringstream h;
    h << "frame,origin_x,origin_y,origin_z,origin_yaw,origin_pitch,origin_roll";
    for (int d = 0; d < kDofCount; ++d) {
        char buf[16];
        std::snprintf(buf, sizeof buf, ",dof_%02d", d);
        h << buf;
    }
    for (int j = 0; j < kJointCount; ++j) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ",j%02d_x,j%02d_y,j%02d_z", j, j, j);
        h << buf;
    }
    h << ",max_weight,lost";
    return h.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

void write_report_csv(const TrackReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out << csv_header() << "\n";
    for (const auto& rec : report.records) {
        out << rec.frame;
        out << ',' << format_fixed(rec.origin.position.x()) << ','
            << format_fixed(rec.origin.position.y()) << ','
            << format_fixed(rec.origin.position.z()) << ',' << format_fixed(rec.origin.yaw_deg)
            << ',' << format_fixed(rec.origin.pitch_deg) << ','
            << format_fixed(rec.origin.roll_deg);
        for (double a : rec.pose.angles_deg)
            out << ',' << format_fixed(a);
        for (const auto& j : rec.joints)
            out << ',' << format_fixed(j.x()) << ',' << format_fixed(j.y()) << ','
                << format_fixed(j.z());
        out << ',' << format_fixed(rec.max_weight) << ',' << (rec.lost ? 1 : 0) << "\n";
    }
    if (!out)
        throw Error("short write: " + path);
}

TrackReport read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw Error("empty report: " + path);
    if (line.back() == '\r')
        line.pop_back();
    if (line != csv_header())
        throw Error("unexpected report header in " + path);

    const std::size_t expected = 1 + 6 + kDofCount + 3 * kJointCount + 2;
    TrackReport report;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != expected)
            throw Error("malformed report row in " + path);
        FrameRecord rec;
        std::size_t i = 0;
        rec.frame = std::stoi(fields[i++]);
        rec.origin.position.x() = std::stod(fields[i++]);
        rec.origin.position.y() = std::stod(fields[i++]);
        rec.origin.position.z() = std::stod(fields[i++]);
        rec.origin.yaw_deg = std::stod(fields[i++]);
        rec.origin.pitch_deg = std::stod(fields[i++]);
        rec.origin.roll_deg = std::stod(fields[i++]);
        rec.pose.angles_deg.resize(kDofCount);
        for (int d = 0; d < kDofCount; ++d)
            rec.pose.angles_deg[d] = std::stod(fields[i++]);
        rec.joints.resize(kJointCount);
        for (int j = 0; j < kJointCount; ++j) {
            rec.joints[j].x() = std::stod(fields[i++]);
            rec.joints[j].y() = std::stod(fields[i++]);
            rec.joints[j].z() = std::stod(fields[i++]);
        }
        rec.max_weight = std::stod(fields[i++]);
        rec.lost = std::stoi(fields[i++]) != 0;
        report.records.push_back(std::move(rec));
    }
    return report;
}

PoseVector trajectory_pose(const TrajectorySpec& trajectory, const SkeletonSpec& spec, int frame) {
    PoseVector pose = spec.neutral_pose();
    const double t = trajectory.frame_time(frame);
    for (const auto& [dof, waveform] : trajectory.dof_motion)
        pose.angles_deg[dof] = waveform.sample(t);
    return pose;
}

RigidTransform trajectory_origin(const TrajectorySpec& trajectory, int frame) {
    const auto& path = trajectory.origin_path;
    const double t = trajectory.frame_time(frame);
    if (t <= path.front().time_s)
        return path.front().origin;
    if (t >= path.back().time_s)
        return path.back().origin;
    std::size_t hi = 1;
    while (path[hi].time_s < t)
        ++hi;
    const auto& a = path[hi - 1];
    const auto& b = path[hi];
    const double f = (t - a.time_s) / (b.time_s - a.time_s);
    RigidTransform out;
    out.position = (1.0 - f) * a.origin.position + f * b.origin.position;
    out.yaw_deg = (1.0 - f) * a.origin.yaw_deg + f * b.origin.yaw_deg;
    out.pitch_deg = (1.0 - f) * a.origin.pitch_deg + f * b.origin.pitch_deg;
    out.roll_deg = (1.0 - f) * a.origin.roll_deg + f * b.origin.roll_deg;
    return out;
}

TrackReport generate_synthetic(const AppConfig& config, const std::string& out_dir) {
    const auto& trajectory = config.trajectory;
    const auto& spec = config.skeleton;
    const int frames = trajectory.frame_count();
    if (frames < 1)
        throw Error("trajectory produces no frames");

    // Sample every frame up front and enforce the physiological bound on the
    // tracked DOFs plus joint limits everywhere.
    std::vector<PoseVector> poses(frames);
    std::vector<RigidTransform> origins(frames);
    for (int k = 0; k < frames; ++k) {
        poses[k] = trajectory_pose(trajectory, spec, k);
        origins[k] = trajectory_origin(trajectory, k);
        const auto violations = validate_pose(spec, poses[k]);
        if (!violations.empty())
            throw Error("trajectory violates joint limits at frame " + std::to_string(k) +
                        ", dof " + std::to_string(violations.front()));
    }
    const auto& interval = config.tracker.interval;
    for (int k = 1; k < frames; ++k) {
        for (std::size_t i = 0; i < interval.tracked_dofs.size(); ++i) {
            const int dof = interval.tracked_dofs[i];
            const double change = std::abs(poses[k].angles_deg[dof] - poses[k - 1].angles_deg[dof]);
            if (change > interval.half_width_deg[i] + 1e-9)
                throw Error("trajectory moves dof " + std::to_string(dof) + " by " +
                            format_fixed(change) + " deg at frame " + std::to_string(k) +
                            ", above the interval half-width");
        }
    }

    for (std::size_t c = 0; c < config.cameras.size(); ++c)
        fs::create_directories(fs::path(out_dir) / ("cam" + std::to_string(c)));

    TrackReport truth;
    truth.records.resize(frames);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < frames; ++k) {
        const auto joints = forward_kinematics(spec, poses[k], origins[k]);
        const BodyVolume body = flesh(spec, joints);
        for (std::size_t c = 0; c < config.cameras.size(); ++c) {
            char name[32];
            std::snprintf(name, sizeof name, "%06d.pgm", k);
            const auto path = fs::path(out_dir) / ("cam" + std::to_string(c)) / name;
            write_pgm(rasterize(config.cameras[c], body), path.string());
        }
        truth.records[k] = {k, origins[k], poses[k], joints, 1.0, false};
    }
    write_report_csv(truth, (fs::path(out_dir) / "truth.csv").string());
    return truth;
}

std::vector<BinaryImage> SequenceInput::frame(int k) const {
    std::vector<BinaryImage> out;
    out.reserve(silhouettes.size());
    for (const auto& cam : silhouettes)
        out.push_back(cam[k]);
    return out;
}

void SequenceInput::validate() const {
    if (silhouettes.empty() || silhouettes[0].empty())
        throw Error("empty frame sequence");
    for (const auto& cam : silhouettes)
        if (cam.size() != silhouettes[0].size())
            throw Error("cameras have differing frame counts");
}

std::vector<std::string> list_frame_files(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw Error("not a directory: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        const std::string ext = entry.path().extension().string();
        const std::string stem = entry.path().stem().string();
        if ((ext == ".pgm" || ext == ".png") && !stem.empty() &&
            std::all_of(stem.begin(), stem.end(), [](char c) { return std::isdigit(c); }))
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error("no numbered .pgm/.png frames in " + dir);
    return files;
}

namespace {

std::vector<std::string> camera_dirs(const std::string& dir, int camera_count) {
    std::vector<std::string> dirs;
    if (fs::is_directory(fs::path(dir) / "cam0")) {
        for (int c = 0; c < camera_count; ++c) {
            const auto sub = fs::path(dir) / ("cam" + std::to_string(c));
            if (!fs::is_directory(sub))
                throw Error("missing camera directory: " + sub.string());
            dirs.push_back(sub.string());
        }
    } else {
        if (camera_count != 1)
            throw Error("flat frame directory requires a single-camera config");
        dirs.push_back(dir);
    }
    return dirs;
}

} // namespace

SequenceInput load_silhouette_sequence(const std::string& dir, int camera_count) {
    SequenceInput seq;
    for (const auto& cdir : camera_dirs(dir, camera_count)) {
        std::vector<BinaryImage> frames;
        for (const auto& file : list_frame_files(cdir))
            frames.push_back(read_mask(file));
        seq.silhouettes.push_back(std::move(frames));
    }
    seq.validate();
    return seq;
}

SequenceInput load_raw_sequence(const std::string& dir, int camera_count,
                                const SegmentationConfig& segmentation) {
    SequenceInput seq;
    for (const auto& cdir : camera_dirs(dir, camera_count)) {
        GrayImage background;
        bool have_background = false;
        for (const char* name : {"background.pgm", "background.png"}) {
            const auto p = fs::path(cdir) / name;
            if (fs::exists(p)) {
                background = read_gray(p.string());
                have_background = true;
                break;
            }
        }
        if (!have_background)
            throw Error("no background.pgm/.png in " + cdir);
        std::vector<BinaryImage> frames;
        for (const auto& file : list_frame_files(cdir)) {
            BinaryImage mask = background_subtract(read_gray(file), background,
                                                   segmentation.threshold);
            if (segmentation.open_close)
                mask = open_close(mask);
            frames.push_back(std::move(mask));
        }
        seq.silhouettes.push_back(std::move(frames));
    }
    seq.validate();
    return seq;
}

namespace {

FrameRecord make_record(int frame, const RigidTransform& origin, const PoseVector& pose,
                        const SkeletonSpec& spec, double max_weight, bool lost) {
    return {frame, origin, pose, forward_kinematics(spec, pose, origin), max_weight, lost};
}

} // namespace

TrackReport run_tracker(const AppConfig& config, const SequenceInput& sequence,
                        const std::string& out_dir, std::ostream* log) {
    config.validate();
    sequence.validate();
    if (sequence.camera_count() != static_cast<int>(config.cameras.size()))
        throw Error("sequence camera count does not match the config");

    const auto& spec = config.skeleton;
    const auto& tracker = config.tracker;
    const int dof_count = static_cast<int>(spec.dofs().size());
    const int frames = sequence.frame_count();

    TrackReport report;
    report.records.reserve(frames);

    // Frame 0: exhaustive initialization.
    std::vector<BinaryImage> observation = sequence.frame(0);
    InitResult init = initialize(config.init, tracker.interval, spec, observation, config.cameras);
    std::vector<Particle> particles = std::move(init.evaluated);
    RigidTransform origin = init.origin;
    PoseVector estimate = assemble_pose(init.best, tracker.interval, dof_count);
    report.records.push_back(make_record(0, origin, estimate, spec, init.best.weight, false));
    if (log)
        *log << "[track] frame 0 initialized from " << particles.size()
             << " grid configurations, weight " << init.best.weight << "\n";

    for (int k = 1; k < frames; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        observation = sequence.frame(k);

        const OriginEstimate oe = estimate_origin(estimate, origin, observation, config.cameras,
                                                  spec, config.origin_search);
        origin = oe.origin;

        const SilhouetteWeight weight_fn(spec, config.cameras, observation, origin);
        StepResult step;
        if (tracker.algorithm == Algorithm::kIpf)
            step = ipf_step(particles, std::cref(weight_fn), tracker, spec, k);
        else
            step = condensation_step(particles, std::cref(weight_fn), tracker, spec, k);

        particles = std::move(step.particles);
        estimate = assemble_pose(step.estimate, tracker.interval, dof_count);
        const bool lost = oe.lost || step.all_zero_weights;
        report.records.push_back(
            make_record(k, origin, estimate, spec, step.estimate.weight, lost));

        if (log) {
            const auto ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            *log << "[track] frame " << k << " time_ms=" << format_fixed(ms)
                 << " weight=" << format_fixed(step.estimate.weight) << (lost ? " LOST" : "")
                 << "\n";
        }
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_report_csv(report, (fs::path(out_dir) / "track.csv").string());
    }
    return report;
}

EvalResult evaluate(const TrackReport& estimate, const TrackReport& truth,
                    const std::string& out_dir) {
    if (estimate.records.size() != truth.records.size())
        throw Error("evaluate: frame counts differ (" + std::to_string(estimate.records.size()) +
                    " vs " + std::to_string(truth.records.size()) + ")");
    if (estimate.records.empty())
        throw Error("evaluate: empty reports");

    const int frames = static_cast<int>(estimate.records.size());
    EvalResult result;
    result.dof_mae_deg.assign(kDofCount, 0.0);
    result.joint_mean_err_m.assign(kJointCount, 0.0);
    result.frame_dof_abs_err.assign(frames, std::vector<double>(kDofCount, 0.0));
    result.frame_joint_err.assign(frames, std::vector<double>(kJointCount, 0.0));

    for (int k = 0; k < frames; ++k) {
        const auto& est = estimate.records[k];
        const auto& ref = truth.records[k];
        for (int d = 0; d < kDofCount; ++d) {
            const double err = std::abs(est.pose.angles_deg[d] - ref.pose.angles_deg[d]);
            result.frame_dof_abs_err[k][d] = err;
            result.dof_mae_deg[d] += err / frames;
        }
        for (int j = 0; j < kJointCount; ++j) {
            const double err = (est.joints[j] - ref.joints[j]).norm();
            result.frame_joint_err[k][j] = err;
            result.joint_mean_err_m[j] += err / frames;
        }
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream summary((fs::path(out_dir) / "eval_summary.csv").string(), std::ios::binary);
        summary << "metric,value\n";
        for (int d = 0; d < kDofCount; ++d) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "dof_mae_deg_%02d", d);
            summary << buf << ',' << format_fixed(result.dof_mae_deg[d]) << "\n";
        }
        for (int j = 0; j < kJointCount; ++j) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "joint_err_m_%02d", j);
            summary << buf << ',' << format_fixed(result.joint_mean_err_m[j]) << "\n";
        }

        std::ofstream per_frame((fs::path(out_dir) / "eval_frames.csv").string(), std::ios::binary);
        per_frame << "frame";
        for (int d = 0; d < kDofCount; ++d) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",dof_err_%02d", d);
            per_frame << buf;
        }
        for (int j = 0; j < kJointCount; ++j) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",joint_err_%02d", j);
            per_frame << buf;
        }
        per_frame << ",mean_dof_err,mean_joint_err\n";
        for (int k = 0; k < frames; ++k) {
            per_frame << k;
            double dsum = 0.0, jsum = 0.0;
            for (int d = 0; d < kDofCount; ++d) {
                per_frame << ',' << format_fixed(result.frame_dof_abs_err[k][d]);
                dsum += result.frame_dof_abs_err[k][d];
            }
            for (int j = 0; j < kJointCount; ++j) {
                per_frame << ',' << format_fixed(result.frame_joint_err[k][j]);
                jsum += result.frame_joint_err[k][j];
            }
            per_frame << ',' << format_fixed(dsum / kDofCount) << ','
                      << format_fixed(jsum / kJointCount) << "\n";
        }
    }
    return result;
}

void render_overlay(const TrackReport& report, const std::vector<std::string>& frame_files,
                    const CameraModel& camera, const SkeletonSpec& spec,
                    const std::string& out_dir) {
    if (report.records.empty())
        return; // nothing to draw
    if (frame_files.size() != report.records.size())
        throw Error("render_overlay: report and frame sequence are misaligned");
    fs::create_directories(out_dir);

    for (std::size_t k = 0; k < report.records.size(); ++k) {
        const GrayImage base = read_gray(frame_files[k]);
        if (base.width() != camera.width || base.height() != camera.height)
            throw Error("render_overlay: frame dimensions do not match the camera");
        const auto& rec = report.records[k];
        const BinaryImage mask =
            rasterize(camera, flesh(spec, forward_kinematics(spec, rec.pose, rec.origin)));

        GrayImage out(camera.width, camera.height);
        for (int y = 0; y < camera.height; ++y) {
            for (int x = 0; x < camera.width; ++x) {
                bool boundary = false;
                if (mask.get(x, y)) {
                    boundary = x == 0 || y == 0 || x == camera.width - 1 ||
                               y == camera.height - 1 || !mask.get(x - 1, y) ||
                               !mask.get(x + 1, y) || !mask.get(x, y - 1) || !mask.get(x, y + 1);
                }
                out.at(x, y) = boundary ? 255 : base.at(x, y) / 2;
            }
        }
        char name[32];
        std::snprintf(name, sizeof name, "overlay_%06d.pgm", static_cast<int>(k));
        write_pgm(out, (fs::path(out_dir) / name).string());
    }
}

} // namespace ipf
