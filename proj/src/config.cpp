#include "ipf/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ipf/error.hpp"

namespace ipf {

double Waveform::sample(double t_seconds) const {
    if (type == Type::kConstant)
        return value;
    return center_deg + amplitude_deg * std::sin(2.0 * kPi * t_seconds / period_s +
                                                 deg_to_rad(phase_deg));
}

int TrajectorySpec::frame_count() const {
    return static_cast<int>(std::lround(duration_s * fps));
}

namespace {

using nlohmann::json;

RigidTransform parse_transform(const json& j) {
    RigidTransform t;
    const auto& pos = j.at("position");
    t.position = Vec3(pos.at(0).get<double>(), pos.at(1).get<double>(), pos.at(2).get<double>());
    const auto& ori = j.at("orientation");
    t.yaw_deg = ori.at(0).get<double>();
    t.pitch_deg = ori.at(1).get<double>();
    t.roll_deg = ori.at(2).get<double>();
    t.normalize_angles();
    return t;
}

// DOFs are referenced as "joint:axis", e.g. "l_hip:x".
int parse_dof_ref(const SkeletonSpec& spec, const std::string& ref) {
    const auto colon = ref.find(':');
    if (colon == std::string::npos)
        throw Error("bad DOF reference '" + ref + "' (expected joint:axis)");
    const int dof = spec.dof_index(ref.substr(0, colon), axis_from_string(ref.substr(colon + 1)));
    if (dof < 0)
        throw Error("DOF reference '" + ref + "' does not name a skeleton DOF");
    return dof;
}

CameraModel parse_camera(const json& j) {
    CameraModel cam;
    cam.focal_px = j.at("focal").get<double>();
    cam.principal_x = j.at("principal").at(0).get<double>();
    cam.principal_y = j.at("principal").at(1).get<double>();
    cam.width = j.at("resolution").at(0).get<int>();
    cam.height = j.at("resolution").at(1).get<int>();
    cam.extrinsic = parse_transform(j.at("extrinsic"));
    cam.validate();
    return cam;
}

TrackerConfig parse_tracker(const json& j, const SkeletonSpec& spec) {
    TrackerConfig cfg;
    cfg.survivors = j.at("survivors").get<int>();
    for (const auto& ref : j.at("tracked_dofs"))
        cfg.interval.tracked_dofs.push_back(parse_dof_ref(spec, ref.get<std::string>()));
    const std::size_t n = cfg.interval.tracked_dofs.size();

    // half_width and q accept a scalar (applied to every tracked DOF) or a list.
    const auto& hw = j.at("half_width_deg");
    if (hw.is_array())
        cfg.interval.half_width_deg = hw.get<std::vector<double>>();
    else
        cfg.interval.half_width_deg.assign(n, hw.get<double>());
    const auto& q = j.at("q");
    if (q.is_array())
        cfg.interval.q = q.get<std::vector<int>>();
    else
        cfg.interval.q.assign(n, q.get<int>());

    cfg.rest_noise_sigma_deg = j.value("rest_noise_sigma_deg", 2.0);
    cfg.rng_seed = j.value("seed", std::uint64_t(0));
    const std::string algo = j.value("algorithm", std::string("ipf"));
    if (algo == "ipf")
        cfg.algorithm = Algorithm::kIpf;
    else if (algo == "condensation")
        cfg.algorithm = Algorithm::kCondensation;
    else
        throw Error("unknown algorithm '" + algo + "'");
    if (j.contains("condensation")) {
        cfg.condensation_noise_sigma_deg = j["condensation"].value("noise_sigma_deg", 3.0);
        cfg.condensation_particles = j["condensation"].value("particles", 0L);
    }
    return cfg;
}

OriginSearchSpec parse_origin_search(const json& j) {
    OriginSearchSpec s;
    s.position_range_m = j.value("position_range_m", 0.3);
    s.position_step_m = j.value("position_step_m", 0.05);
    s.rotation_range_deg = j.value("rotation_range_deg", 15.0);
    s.rotation_step_deg = j.value("rotation_step_deg", 5.0);
    s.passes = j.value("passes", 1);
    return s;
}

InitGrid parse_init(const json& j, const SkeletonSpec& spec) {
    InitGrid grid;
    grid.defaults = spec.neutral_pose();
    if (j.contains("defaults"))
        for (const auto& [ref, value] : j["defaults"].items())
            grid.defaults.angles_deg[parse_dof_ref(spec, ref)] = value.get<double>();
    for (const auto& entry : j.at("grid")) {
        const int dof = parse_dof_ref(spec, entry.at("dof").get<std::string>());
        std::vector<double> values;
        if (entry.contains("values")) {
            values = entry["values"].get<std::vector<double>>();
        } else {
            // span the DOF's limit range at the given step
            const double step = entry.at("step").get<double>();
            if (!(step > 0.0))
                throw Error("init grid: step must be positive");
            const auto& dofspec = spec.dofs()[dof];
            for (double v = dofspec.limit_min_deg; v <= dofspec.limit_max_deg + 1e-9; v += step)
                values.push_back(std::min(v, dofspec.limit_max_deg));
        }
        grid.dof_values.emplace_back(dof, std::move(values));
    }
    for (const auto& o : j.at("origins"))
        grid.origins.push_back(parse_transform(o));
    grid.budget = j.value("budget", 200000L);
    return grid;
}

Waveform parse_waveform(const json& j) {
    Waveform w;
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") {
        w.type = Waveform::Type::kConstant;
        w.value = j.at("value").get<double>();
    } else if (type == "sinusoid") {
        w.type = Waveform::Type::kSinusoid;
        w.center_deg = j.value("center_deg", 0.0);
        w.amplitude_deg = j.at("amplitude_deg").get<double>();
        w.period_s = j.at("period_s").get<double>();
        w.phase_deg = j.value("phase_deg", 0.0);
        if (!(w.period_s > 0.0))
            throw Error("trajectory: sinusoid period must be positive");
    } else {
        throw Error("unknown waveform type '" + type + "'");
    }
    return w;
}

TrajectorySpec parse_trajectory(const json& j, const SkeletonSpec& spec) {
    TrajectorySpec t;
    t.duration_s = j.at("duration_s").get<double>();
    t.fps = j.value("fps", 20.0);
    if (!(t.duration_s > 0.0) || !(t.fps > 0.0))
        throw Error("trajectory: duration and fps must be positive");
    if (j.contains("dof_motion"))
        for (const auto& [ref, wf] : j["dof_motion"].items())
            t.dof_motion.emplace_back(parse_dof_ref(spec, ref), parse_waveform(wf));
    for (const auto& wp : j.at("origin_path")) {
        OriginWaypoint w;
        w.time_s = wp.at("time_s").get<double>();
        w.origin = parse_transform(wp);
        t.origin_path.push_back(w);
    }
    if (t.origin_path.empty())
        throw Error("trajectory: origin_path needs at least one waypoint");
    for (std::size_t i = 1; i < t.origin_path.size(); ++i)
        if (t.origin_path[i].time_s <= t.origin_path[i - 1].time_s)
            throw Error("trajectory: origin_path times must be strictly increasing");
    return t;
}

} // namespace

void AppConfig::validate() const {
    if (cameras.empty())
        throw Error("config: at least one camera required");
    for (const auto& cam : cameras)
        cam.validate();
    tracker.validate(static_cast<int>(skeleton.dofs().size()));
    origin_search.validate();
    init.validate(skeleton);
    if (segmentation.threshold < 0)
        throw Error("config: segmentation threshold must be nonnegative");
}

AppConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("config parse error in " + path + ": " + e.what());
    }

    try {
        AppConfig cfg;
        cfg.skeleton = SkeletonSpec::from_json(j.at("skeleton"));
        for (const auto& jc : j.at("cameras"))
            cfg.cameras.push_back(parse_camera(jc));
        cfg.tracker = parse_tracker(j.at("tracker"), cfg.skeleton);
        cfg.origin_search = parse_origin_search(j.value("origin_search", json::object()));
        cfg.init = parse_init(j.at("init"), cfg.skeleton);
        if (j.contains("segmentation")) {
            cfg.segmentation.threshold = j["segmentation"].value("threshold", 25);
            cfg.segmentation.open_close = j["segmentation"].value("open_close", false);
        }
        if (j.contains("trajectory"))
            cfg.trajectory = parse_trajectory(j["trajectory"], cfg.skeleton);

        if (const char* env = std::getenv("IPF_SEED"); env && !seed_override)
            cfg.tracker.rng_seed = std::strtoull(env, nullptr, 10);
        if (seed_override)
            cfg.tracker.rng_seed = *seed_override;

        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw Error("config error in " + path + ": " + e.what());
    }
}

} // namespace ipf
