#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psmkit/transform.hpp"

namespace psmkit {

/// Per-joint values: radians for revolute joints, meters for prismatic joints.
using JointVector = Eigen::VectorXd;

enum class JointKind { Revolute, Prismatic };

/// One row of a modified-DH table. A row without a joint index is fixed.
struct DhRow {
    double alpha_prev = 0.0;    // rad
    double a_prev = 0.0;        // m
    double d = 0.0;             // m, constant part
    double theta_offset = 0.0;  // rad, constant part
    JointKind kind = JointKind::Revolute;
    std::optional<std::size_t> joint;
};

struct JointLimit {
    double min = 0.0;
    double max = 0.0;
    bool contains(double q) const noexcept { return q >= min && q <= max; }
};

/// Modified-DH link transform for `row` with joint value `q` added to theta
/// (revolute) or d (prismatic). `q` is ignored for fixed rows.
HomogeneousTransform dh_transform(const DhRow& row, double q);

class KinematicChain {
public:
    /// Validates the rows and fills absent limits with the defaults
    /// ([-pi, pi] revolute, [0, 0.24 m] prismatic). Throws ValidationError.
    KinematicChain(std::string name, std::vector<DhRow> rows, std::vector<JointLimit> limits = {},
                   std::map<std::string, double> tool_constants = {},
                   HomogeneousTransform tip_offset = HomogeneousTransform::identity());

    const std::string& name() const noexcept { return name_; }
    const std::vector<DhRow>& rows() const noexcept { return rows_; }
    std::size_t joint_count() const noexcept { return joint_count_; }
    const std::vector<JointLimit>& limits() const noexcept { return limits_; }
    const std::map<std::string, double>& tool_constants() const noexcept { return tool_constants_; }
    const HomogeneousTransform& tip_offset() const noexcept { return tip_offset_; }
    JointKind joint_kind(std::size_t joint) const { return joint_kinds_.at(joint); }

    /// Index of the row carrying `joint`.
    std::size_t row_of_joint(std::size_t joint) const { return row_of_joint_.at(joint); }

    /// Looks up a tool constant; throws ConfigurationError if it is missing.
    double tool_constant(const std::string& key) const;

    /// Throws JointLimitError naming the first offending joint, or
    /// PreconditionError on a dimension mismatch or non-finite value.
    void check_limits(const JointVector& q) const;

private:
    std::string name_;
    std::vector<DhRow> rows_;
    std::size_t joint_count_ = 0;
    std::vector<JointLimit> limits_;
    std::map<std::string, double> tool_constants_;
    HomogeneousTransform tip_offset_;
    std::vector<JointKind> joint_kinds_;
    std::vector<std::size_t> row_of_joint_;
};

struct FkResult {
    HomogeneousTransform tip;
    /// frames[k] is the product of the link transforms of rows 0..k.
    std::vector<HomogeneousTransform> frames;
};

/// Forward kinematics with joint-limit checking.
FkResult forward_kinematics(const KinematicChain& chain, const JointVector& q);

/// Tip pose only; same checks as forward_kinematics.
HomogeneousTransform tip_pose(const KinematicChain& chain, const JointVector& q);

/// Product of the link transforms of rows [0, row_end), with no limit check.
HomogeneousTransform partial_product(const KinematicChain& chain, const JointVector& q, std::size_t row_end);

/// Parses a robot-description JSON document.
KinematicChain load_chain(std::string_view json_text);
KinematicChain load_chain_file(const std::string& path);

/// The compiled-in PSM + Large Needle Driver description.
std::string_view bundled_psm_description();
KinematicChain bundled_psm_chain();

/// Serializes a chain back to the robot-description format.
std::string chain_to_json(const KinematicChain& chain);

}  // namespace psmkit
