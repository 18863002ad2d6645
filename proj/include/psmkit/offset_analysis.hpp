#pragma once

#include <span>
#include <vector>

#include "psmkit/chain.hpp"

namespace psmkit {

/// Per-joint potentiometer offset errors (rad for revolute joints, m for the
/// prismatic joint). Missing trailing entries are zero.
using OffsetErrorVector = Eigen::VectorXd;

/// Deepest joint the realignment analysis covers.
inline constexpr int kMaxRealignmentDepth = 3;

/// q + delta, with delta zero-padded to the length of q.
JointVector apply_offset_errors(const JointVector& q, const OffsetErrorVector& delta);

/// Transform from the virtual (error-tilted) base frame to the actual base
/// frame that realigns joint frame `depth`: the product of the first `depth`
/// link transforms evaluated at q + delta, times the inverse of the same
/// product at q. Throws PreconditionError unless 1 <= depth <= 3.
HomogeneousTransform realignment_transform(const KinematicChain& chain, const OffsetErrorVector& delta,
                                           const JointVector& q, int depth);

/// Ry(-delta1).
HomogeneousTransform delta1_closed_form(double delta1);
/// Realignment for an isolated joint 2 error; depends on j1.
HomogeneousTransform delta2_closed_form(double delta2, double j1);
/// Realignment for an isolated joint 3 error: a translation depending on j1, j2.
HomogeneousTransform delta3_closed_form(double delta3, double j1, double j2);

struct ConstancyReport {
    bool is_constant = true;
    double spread = 0.0;  // max pairwise Frobenius distance
    std::size_t samples = 0;
    double tolerance = 0.0;
};

inline constexpr double kDefaultConstancyTolerance = 1e-9;

/// Evaluates the realignment transform at every sample and reports whether it
/// is constant, i.e. whether one hand-eye calibration can absorb `delta`.
/// Throws PreconditionError with fewer than two samples or when the samples do
/// not vary j1 (and j2 at depth 3).
ConstancyReport constancy_test(const KinematicChain& chain, const OffsetErrorVector& delta,
                               std::span<const JointVector> config_samples,
                               double tolerance = kDefaultConstancyTolerance, int depth = kMaxRealignmentDepth);

/// 5 x 5 grid over j1 in [-pi/3, pi/3], j2 in [-pi/4, pi/4]; insertion 0.1 m
/// (clamped to limits), all other joints at zero.
std::vector<JointVector> default_constancy_samples(const KinematicChain& chain);

}  // namespace psmkit
