#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psmkit/chain.hpp"
#include "psmkit/offset_analysis.hpp"

namespace psmkit {

/// One relative-motion pair of AX = XB: A in the camera frame, B in the robot base frame.
struct MotionPair {
    HomogeneousTransform A;
    HomogeneousTransform B;
};

struct HandEyeResult {
    HomogeneousTransform X;            // camera -> PSM base
    double rotation_residual = 0.0;    // rad, RMS over pairs
    double translation_residual = 0.0; // m, RMS over pairs
};

inline constexpr double kDefaultAxisSeparation = 0.1;  // rad

/// Closed-form AX = XB: the rotation is the orthogonal Procrustes fit between
/// the rotation log-vectors of A and B (Park-Martin); the translation follows
/// from stacked linear least squares. Throws DegenerateMotionError, carrying
/// the largest measured angle between rotation axes, if there are fewer than
/// two pairs or no two axes differ by more than `min_axis_angle`.
HandEyeResult solve_ax_xb(std::span<const MotionPair> pairs, double min_axis_angle = kDefaultAxisSeparation);

/// Largest angle between the (unsigned) rotation axes of the B motions; 0 when
/// fewer than two motions rotate at all.
double max_axis_separation(std::span<const MotionPair> pairs);

struct MotionNoise {
    double rot_std = 0.0;    // rad
    double trans_std = 0.0;  // m
};

struct DatasetOptions {
    std::size_t n_motions = 10;
    /// Draw robot motions from RCM-constrained configurations (j1, j2, insertion)
    /// of a PSM-like mechanism instead of free rigid motions.
    bool rcm_constrained = false;
    /// With rcm_constrained: keep j1, j2 fixed so every motion is a pure insertion.
    bool insertion_only = false;
    MotionNoise noise{};
    std::uint64_t seed = 0;
};

/// B_i are robot relative motions; A_i = X B_i X^-1 with noise applied to A_i.
std::vector<MotionPair> generate_handeye_dataset(const HomogeneousTransform& X_true, const DatasetOptions& options);

/// Camera-frame tip pose cT0hat * FK(q + delta).
HomogeneousTransform compensated_tip_pose(const HomogeneousTransform& cT0hat, const KinematicChain& chain,
                                          const OffsetErrorVector& delta, const JointVector& q);

/// Hand-eye result that a calibration performed with a first-joint offset
/// error converges to: the true camera-to-base transform composed with the
/// inverse of the joint 1 realignment.
HomogeneousTransform tilted_handeye(const HomogeneousTransform& cT0_true, double delta1);

}  // namespace psmkit
