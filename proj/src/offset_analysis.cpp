#include "psmkit/offset_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psmkit/error.hpp"
#include "psmkit/kernels.hpp"

namespace psmkit {

JointVector apply_offset_errors(const JointVector& q, const OffsetErrorVector& delta) {
    if (delta.size() > q.size()) throw PreconditionError("offset error vector is longer than the joint vector");
    JointVector out = q;
    out.head(delta.size()) += delta;
    return out;
}

HomogeneousTransform realignment_transform(const KinematicChain& chain, const OffsetErrorVector& delta,
                                           const JointVector& q, int depth) {
    if (depth < 1 || depth > kMaxRealignmentDepth)
        throw PreconditionError("realignment depth must be in [1, " + std::to_string(kMaxRealignmentDepth) + "]");
    if (static_cast<std::size_t>(depth) > chain.joint_count())
        throw PreconditionError("realignment depth exceeds the chain's joint count");
    if (static_cast<std::size_t>(q.size()) != chain.joint_count())
        throw PreconditionError("joint vector size does not match the chain");
    const Eigen::Index head = std::min<Eigen::Index>(depth, delta.size());
    if (delta.head(head).isZero(0.0)) return HomogeneousTransform::identity();
    const std::size_t row_end = chain.row_of_joint(static_cast<std::size_t>(depth) - 1) + 1;
    const auto virtual_part = partial_product(chain, apply_offset_errors(q, delta), row_end);
    const auto actual_part = partial_product(chain, q, row_end);
    return virtual_part * actual_part.inverse();
}

HomogeneousTransform delta1_closed_form(double delta1) {
    const double c = std::cos(delta1), s = std::sin(delta1);
    Eigen::Matrix3d r;
    r << c, 0, -s,
         0, 1, 0,
         s, 0, c;
    return HomogeneousTransform::from_rotation(r);
}

HomogeneousTransform delta2_closed_form(double delta2, double j1) {
    const double cd = std::cos(delta2), sd = std::sin(delta2);
    const double c1 = std::cos(j1), s1 = std::sin(j1);
    Eigen::Matrix3d r;
    r << c1 * c1 + cd * s1 * s1, sd * s1, -((-1 + cd) * c1 * s1),
         -sd * s1, cd, c1 * sd,
         -((-1 + cd) * c1 * s1), -c1 * sd, cd * c1 * c1 + s1 * s1;
    return HomogeneousTransform::from_rotation(r);
}

HomogeneousTransform delta3_closed_form(double delta3, double j1, double j2) {
    return HomogeneousTransform::from_translation(Eigen::Vector3d(delta3 * std::cos(j2) * std::sin(j1),
                                                                  -delta3 * std::sin(j2),
                                                                  -delta3 * std::cos(j1) * std::cos(j2)));
}

ConstancyReport constancy_test(const KinematicChain& chain, const OffsetErrorVector& delta,
                               std::span<const JointVector> config_samples, double tolerance, int depth) {
    if (config_samples.size() < 2) throw PreconditionError("constancy test needs at least two configurations");
    if (!(tolerance >= 0.0)) throw PreconditionError("constancy tolerance must be non-negative");
    auto varies = [&](Eigen::Index joint) {
        return std::any_of(config_samples.begin(), config_samples.end(),
                           [&](const JointVector& q) { return q[joint] != config_samples.front()[joint]; });
    };
    for (const auto& q : config_samples)
        if (static_cast<std::size_t>(q.size()) != chain.joint_count())
            throw PreconditionError("joint vector size does not match the chain");
    if (!varies(0)) throw PreconditionError("degenerate samples: j1 never changes");
    if (depth >= 3 && !varies(1)) throw PreconditionError("degenerate samples: j2 never changes");

    ConstancyReport report;
    report.samples = config_samples.size();
    report.tolerance = tolerance;
    report.spread = kernels::omp::realignment_spread(chain, delta, config_samples, depth);
    report.is_constant = report.spread <= tolerance;
    return report;
}

std::vector<JointVector> default_constancy_samples(const KinematicChain& chain) {
    std::vector<JointVector> samples;
    const auto n = static_cast<Eigen::Index>(chain.joint_count());
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            JointVector q = JointVector::Zero(n);
            q[0] = -std::numbers::pi / 3 + a * (2 * std::numbers::pi / 3) / 4;
            if (n > 1) q[1] = -std::numbers::pi / 4 + b * (std::numbers::pi / 2) / 4;
            if (n > 2) {
                const auto& lim = chain.limits()[2];
                q[2] = chain.joint_kind(2) == JointKind::Prismatic ? std::clamp(0.1, lim.min, lim.max) : 0.0;
            }
            samples.push_back(q);
        }
    }
    return samples;
}

}  // namespace psmkit
