#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipf/geometry.hpp"

namespace ipf {

inline constexpr int kJointCount = 19;
inline constexpr int kSegmentCount = 17;
inline constexpr int kDofCount = 31;

struct JointSpec {
    std::string name;
    int parent = -1;        // -1 for the root (body origin / sacrum)
    Vec3 rest_offset = Vec3::Zero(); // from the parent, in the parent frame, meters
};

struct SegmentSpec {
    int joint_a = 0;
    int joint_b = 0;
    double radius_m = 0.0;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

Axis axis_from_string(const std::string& s);
const char* axis_name(Axis a);

struct DofSpec {
    int joint = 0;
    Axis axis = Axis::X;
    double limit_min_deg = 0.0;
    double limit_max_deg = 0.0;
};

/// 31 joint angles in degrees, ordered like the DOF table.
struct PoseVector {
    std::vector<double> angles_deg;
};

/// One capsule per segment; endpoints in world coordinates.
struct Capsule {
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
    double radius_m = 0.0;
};

struct BodyVolume {
    std::vector<Capsule> capsules;
};

/// Static body topology: 19 joints, 17 fleshed segments, 31 bounded DOFs.
/// Immutable after load; all queries are const.
class SkeletonSpec {
public:
    static SkeletonSpec from_json(const nlohmann::json& j);

    const std::vector<JointSpec>& joints() const { return joints_; }
    const std::vector<SegmentSpec>& segments() const { return segments_; }
    const std::vector<DofSpec>& dofs() const { return dofs_; }

    int root() const { return root_; }
    /// Parents precede children.
    const std::vector<int>& topological_order() const { return topo_order_; }

    int joint_index(const std::string& name) const; // -1 if unknown
    /// Index into the DOF table, or -1 if the joint has no DOF about that axis.
    int dof_index(int joint, Axis axis) const { return dof_of_[joint][static_cast<int>(axis)]; }
    int dof_index(const std::string& joint_name, Axis axis) const;

    PoseVector neutral_pose() const { return PoseVector{std::vector<double>(dofs_.size(), 0.0)}; }

private:
    void validate() const;
    void build_lookup();

    std::vector<JointSpec> joints_;
    std::vector<SegmentSpec> segments_;
    std::vector<DofSpec> dofs_;
    int root_ = -1;
    std::vector<int> topo_order_;
    int dof_of_[kJointCount][3] = {};
};

/// Indices of every DOF whose angle is outside its limits; empty means valid.
std::vector<int> validate_pose(const SkeletonSpec& spec, const PoseVector& pose);

/// Clamps every angle into its limit range. Idempotent.
PoseVector clamp_pose(const SkeletonSpec& spec, const PoseVector& pose);

/// World positions of all 19 joints. Per-joint local rotation composes the
/// joint's DOF angles as Rz*Ry*Rx; the chain is rooted at `origin`.
/// Throws if the pose violates joint limits, naming the offending DOFs.
std::vector<Vec3> forward_kinematics(const SkeletonSpec& spec, const PoseVector& pose,
                                     const RigidTransform& origin);

/// One capsule per segment around the given joint positions.
BodyVolume flesh(const SkeletonSpec& spec, const std::vector<Vec3>& joint_positions);

} // namespace ipf
