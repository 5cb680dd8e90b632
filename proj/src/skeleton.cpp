#include "ipf/skeleton.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ipf/error.hpp"

namespace ipf {

Axis axis_from_string(const std::string& s) {
    if (s == "x")
        return Axis::X;
    if (s == "y")
        return Axis::Y;
    if (s == "z")
        return Axis::Z;
    throw Error("unknown rotation axis '" + s + "' (expected x, y or z)");
}

const char* axis_name(Axis a) {
    switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    default: return "z";
    }
}

SkeletonSpec SkeletonSpec::from_json(const nlohmann::json& j) {
    SkeletonSpec spec;
    std::vector<std::pair<int, std::string>> parent_names;
    for (const auto& jj : j.at("joints")) {
        JointSpec joint;
        joint.name = jj.at("name").get<std::string>();
        joint.parent = -1;
        if (!jj.at("parent").is_null())
            parent_names.emplace_back(static_cast<int>(spec.joints_.size()),
                                      jj.at("parent").get<std::string>());
        const auto& off = jj.at("offset");
        joint.rest_offset = Vec3(off.at(0).get<double>(), off.at(1).get<double>(), off.at(2).get<double>());
        spec.joints_.push_back(std::move(joint));
    }
    for (const auto& [idx, pname] : parent_names) {
        const int p = spec.joint_index(pname);
        if (p < 0)
            throw Error("joint parent '" + pname + "' not defined");
        spec.joints_[idx].parent = p;
    }

    for (const auto& js : j.at("segments")) {
        SegmentSpec seg;
        seg.joint_a = spec.joint_index(js.at("joints").at(0).get<std::string>());
        seg.joint_b = spec.joint_index(js.at("joints").at(1).get<std::string>());
        if (seg.joint_a < 0 || seg.joint_b < 0)
            throw Error("segment references unknown joint");
        seg.radius_m = js.at("radius").get<double>();
        spec.segments_.push_back(seg);
    }

    for (const auto& jd : j.at("dofs")) {
        DofSpec dof;
        dof.joint = spec.joint_index(jd.at("joint").get<std::string>());
        if (dof.joint < 0)
            throw Error("dof references unknown joint");
        dof.axis = axis_from_string(jd.at("axis").get<std::string>());
        dof.limit_min_deg = jd.at("min").get<double>();
        dof.limit_max_deg = jd.at("max").get<double>();
        spec.dofs_.push_back(dof);
    }

    spec.validate();
    spec.build_lookup();
    return spec;
}

int SkeletonSpec::joint_index(const std::string& name) const {
    for (std::size_t i = 0; i < joints_.size(); ++i)
        if (joints_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int SkeletonSpec::dof_index(const std::string& joint_name, Axis axis) const {
    const int joint = joint_index(joint_name);
    if (joint < 0)
        return -1;
    return dof_of_[joint][static_cast<int>(axis)];
}

void SkeletonSpec::validate() const {
    if (joints_.size() != kJointCount)
        throw Error("skeleton must have exactly 19 joints, got " + std::to_string(joints_.size()));
    if (segments_.size() != kSegmentCount)
        throw Error("skeleton must have exactly 17 segments, got " + std::to_string(segments_.size()));
    if (dofs_.size() != kDofCount)
        throw Error("skeleton must have exactly 31 dof entries, got " + std::to_string(dofs_.size()));

    int roots = 0;
    for (const auto& joint : joints_)
        if (joint.parent < 0)
            ++roots;
    if (roots != 1)
        throw Error("skeleton must have exactly one root joint, got " + std::to_string(roots));

    // Every non-root joint must reach the root without cycles.
    for (int i = 0; i < kJointCount; ++i) {
        int hops = 0;
        int cur = i;
        while (joints_[cur].parent >= 0) {
            cur = joints_[cur].parent;
            if (++hops > kJointCount)
                throw Error("joint parent links contain a cycle at '" + joints_[i].name + "'");
        }
    }

    for (const auto& seg : segments_) {
        if (seg.joint_a == seg.joint_b)
            throw Error("segment joins a joint to itself");
        if (!(seg.radius_m > 0.0))
            throw Error("segment radius must be positive");
    }

    for (const auto& dof : dofs_) {
        if (!(dof.limit_min_deg < dof.limit_max_deg))
            throw Error("dof limit_min must be below limit_max for joint '" +
                        joints_[dof.joint].name + "'");
    }
}

void SkeletonSpec::build_lookup() {
    for (auto& row : dof_of_)
        std::fill(std::begin(row), std::end(row), -1);
    for (std::size_t i = 0; i < dofs_.size(); ++i) {
        auto& slot = dof_of_[dofs_[i].joint][static_cast<int>(dofs_[i].axis)];
        if (slot >= 0)
            throw Error("duplicate dof axis on joint '" + joints_[dofs_[i].joint].name + "'");
        slot = static_cast<int>(i);
    }

    for (std::size_t i = 0; i < joints_.size(); ++i)
        if (joints_[i].parent < 0)
            root_ = static_cast<int>(i);

    topo_order_.clear();
    std::vector<bool> placed(joints_.size(), false);
    topo_order_.push_back(root_);
    placed[root_] = true;
    while (topo_order_.size() < joints_.size()) {
        for (std::size_t i = 0; i < joints_.size(); ++i) {
            if (!placed[i] && placed[joints_[i].parent]) {
                topo_order_.push_back(static_cast<int>(i));
                placed[i] = true;
            }
        }
    }
}

std::vector<int> validate_pose(const SkeletonSpec& spec, const PoseVector& pose) {
    const auto& dofs = spec.dofs();
    std::vector<int> violations;
    if (pose.angles_deg.size() != dofs.size())
        throw Error("pose has " + std::to_string(pose.angles_deg.size()) + " angles, expected " +
                    std::to_string(dofs.size()));
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        const double a = pose.angles_deg[i];
        if (a < dofs[i].limit_min_deg || a > dofs[i].limit_max_deg)
            violations.push_back(static_cast<int>(i));
    }
    return violations;
}

PoseVector clamp_pose(const SkeletonSpec& spec, const PoseVector& pose) {
    const auto& dofs = spec.dofs();
    if (pose.angles_deg.size() != dofs.size())
        throw Error("pose has " + std::to_string(pose.angles_deg.size()) + " angles, expected " +
                    std::to_string(dofs.size()));
    PoseVector out = pose;
    for (std::size_t i = 0; i < dofs.size(); ++i)
        out.angles_deg[i] = std::clamp(out.angles_deg[i], dofs[i].limit_min_deg, dofs[i].limit_max_deg);
    return out;
}

namespace {

Mat3 joint_local_rotation(const SkeletonSpec& spec, const PoseVector& pose, int joint) {
    const int ix = spec.dof_index(joint, Axis::X);
    const int iy = spec.dof_index(joint, Axis::Y);
    const int iz = spec.dof_index(joint, Axis::Z);
    const double ax = ix >= 0 ? pose.angles_deg[ix] : 0.0;
    const double ay = iy >= 0 ? pose.angles_deg[iy] : 0.0;
    const double az = iz >= 0 ? pose.angles_deg[iz] : 0.0;
    return euler_zyx(az, ay, ax);
}

} // namespace

std::vector<Vec3> forward_kinematics(const SkeletonSpec& spec, const PoseVector& pose,
                                     const RigidTransform& origin) {
    const auto violations = validate_pose(spec, pose);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "pose outside joint limits at dof";
        for (int v : violations)
            msg << " " << v << " (" << spec.joints()[spec.dofs()[v].joint].name << " "
                << axis_name(spec.dofs()[v].axis) << ")";
        throw Error(msg.str());
    }

    const auto& joints = spec.joints();
    std::vector<Vec3> positions(joints.size());
    std::vector<Mat3> frames(joints.size());
    const Mat3 origin_rot = origin.rotation();
    for (int j : spec.topological_order()) {
        if (joints[j].parent < 0) {
            positions[j] = origin_rot * joints[j].rest_offset + origin.position;
            frames[j] = origin_rot * joint_local_rotation(spec, pose, j);
        } else {
            const int p = joints[j].parent;
            positions[j] = frames[p] * joints[j].rest_offset + positions[p];
            frames[j] = frames[p] * joint_local_rotation(spec, pose, j);
        }
    }
    return positions;
}

BodyVolume flesh(const SkeletonSpec& spec, const std::vector<Vec3>& joint_positions) {
    if (joint_positions.size() != spec.joints().size())
        throw Error("flesh expects one position per joint");
    BodyVolume body;
    body.capsules.reserve(spec.segments().size());
    for (const auto& seg : spec.segments())
        body.capsules.push_back({joint_positions[seg.joint_a], joint_positions[seg.joint_b], seg.radius_m});
    return body;
}

} // namespace ipf
