#include "psmkit/experiments.hpp"

#include <cmath>
#include <numbers>

#include "psmkit/error.hpp"
#include "psmkit/kernels.hpp"

namespace psmkit {

std::vector<JointVector> interpolate_trajectory(const TrajectorySpec& spec) {
    if (spec.points < 2) throw PreconditionError("a trajectory needs at least two points");
    if (spec.start.size() != spec.end.size()) throw PreconditionError("trajectory endpoints differ in dimension");
    std::vector<JointVector> out;
    out.reserve(spec.points);
    const double last = static_cast<double>(spec.points - 1);
    for (std::size_t i = 0; i < spec.points; ++i) {
        if (i == 0) {
            out.push_back(spec.start);
        } else if (i + 1 == spec.points) {
            out.push_back(spec.end);
        } else {
            const double t = static_cast<double>(i) / last;
            out.push_back(spec.start + t * (spec.end - spec.start));
        }
    }
    return out;
}

std::vector<JointVector> generate_reference_trajectory(const KinematicChain& chain) {
    if (chain.joint_count() < 7) throw PreconditionError("the reference trajectory needs a 7-joint chain");
    const auto n = static_cast<Eigen::Index>(chain.joint_count());
    TrajectorySpec spec{JointVector::Zero(n), JointVector::Zero(n), 1000};
    spec.start.head<3>() << -std::numbers::pi / 5, -std::numbers::pi / 6, 0.2;
    spec.end.head<3>() << std::numbers::pi / 5, std::numbers::pi / 6, 0.2;
    return interpolate_trajectory(spec);
}

RmseResult trajectory_rmse(const KinematicChain& chain, std::span<const JointVector> trajectory, double e2_degrees) {
    if (trajectory.empty()) throw PreconditionError("empty trajectory");
    if (chain.joint_count() < 2) throw PreconditionError("chain has no second joint");
    std::vector<JointVector> shifted(trajectory.begin(), trajectory.end());
    const double e2 = e2_degrees * std::numbers::pi / 180.0;
    for (auto& q : shifted) q[1] += e2;

    const auto reference = kernels::omp::tip_positions(chain, trajectory);
    const auto actual = kernels::omp::tip_positions(chain, shifted);

    RmseResult out;
    out.e2 = e2_degrees;
    out.per_point_errors.reserve(reference.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double err_mm = 1000.0 * (reference[i] - actual[i]).norm();
        out.per_point_errors.push_back(err_mm);
        sq += err_mm * err_mm;
    }
    out.rmse = std::sqrt(sq / static_cast<double>(reference.size()));
    return out;
}

std::vector<RmseResult> trajectory_rmse_experiment(const KinematicChain& chain, std::span<const double> e2_degrees) {
    if (chain.tool_constants().empty())
        throw ConfigurationError("chain '" + chain.name() + "' has no instrument description (tool_constants)");
    const auto trajectory = generate_reference_trajectory(chain);
    std::vector<RmseResult> out;
    out.reserve(e2_degrees.size());
    for (double e2 : e2_degrees) out.push_back(trajectory_rmse(chain, trajectory, e2));
    return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("line fit needs two or more paired values");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw PreconditionError("line fit needs distinct x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace psmkit
