#pragma once

#include <span>
#include <vector>

#include "psmkit/chain.hpp"

namespace psmkit {

struct TrajectorySpec {
    JointVector start;
    JointVector end;
    std::size_t points = 1000;
};

/// Inclusive joint-space linspace from start to end.
std::vector<JointVector> interpolate_trajectory(const TrajectorySpec& spec);

/// 1000 points from [-pi/5, -pi/6, 0.2 m, 0, 0, 0, 0] to [pi/5, pi/6, 0.2 m, 0, 0, 0, 0].
/// Throws PreconditionError for chains with fewer than 7 joints.
std::vector<JointVector> generate_reference_trajectory(const KinematicChain& chain);

struct RmseResult {
    double e2 = 0.0;    // deg
    double rmse = 0.0;  // mm
    std::vector<double> per_point_errors;  // mm
};

/// Tip-position RMSE between `trajectory` and the same trajectory with e2
/// (degrees) added to joint 2.
RmseResult trajectory_rmse(const KinematicChain& chain, std::span<const JointVector> trajectory, double e2_degrees);

/// trajectory_rmse over the reference trajectory for each e2. Throws
/// ConfigurationError if the chain carries no tool constants.
std::vector<RmseResult> trajectory_rmse_experiment(const KinematicChain& chain, std::span<const double> e2_degrees);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace psmkit
