#include "psmkit/handeye.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "psmkit/error.hpp"

namespace psmkit {

namespace {

constexpr double kMinRotation = 1e-9;  // rad; below this a motion has no usable axis

}  // namespace

double max_axis_separation(std::span<const MotionPair> pairs) {
    std::vector<Eigen::Vector3d> axes;
    for (const auto& p : pairs) {
        const Eigen::Vector3d w = rotation_log(p.B.rotation());
        if (w.norm() > kMinRotation) axes.push_back(w.normalized());
    }
    double best = 0.0;
    for (std::size_t i = 0; i < axes.size(); ++i)
        for (std::size_t k = i + 1; k < axes.size(); ++k)
            best = std::max(best, std::acos(std::min(1.0, std::abs(axes[i].dot(axes[k])))));
    return best;
}

HandEyeResult solve_ax_xb(std::span<const MotionPair> pairs, double min_axis_angle) {
    if (pairs.size() < 2) throw DegenerateMotionError("AX = XB needs at least two motion pairs", 0.0);
    const double separation = max_axis_separation(pairs);
    if (!(separation > min_axis_angle))
        throw DegenerateMotionError("rotation axes are (nearly) parallel: max separation " +
                                        std::to_string(separation) + " rad",
                                    separation);

    // alpha_i = R_X beta_i: Procrustes over the log-vectors.
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (const auto& p : pairs) m += rotation_log(p.A.rotation()) * rotation_log(p.B.rotation()).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
    fix(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
    const Eigen::Matrix3d rx = svd.matrixU() * fix * svd.matrixV().transpose();

    // (R_A - I) t_X = R_X t_B - t_A
    const auto n = static_cast<Eigen::Index>(pairs.size());
    Eigen::MatrixXd lhs(3 * n, 3);
    Eigen::VectorXd rhs(3 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = pairs[static_cast<std::size_t>(i)];
        lhs.block<3, 3>(3 * i, 0) = p.A.rotation() - Eigen::Matrix3d::Identity();
        rhs.segment<3>(3 * i) = rx * p.B.translation() - p.A.translation();
    }
    const Eigen::Vector3d tx = lhs.colPivHouseholderQr().solve(rhs);

    HandEyeResult result;
    result.X = HomogeneousTransform(rx, tx);
    double rot_sq = 0.0, trans_sq = 0.0;
    for (const auto& p : pairs) {
        const auto ax = p.A * result.X;
        const auto xb = result.X * p.B;
        const double angle = rotation_angle_between(ax.rotation(), xb.rotation());
        rot_sq += angle * angle;
        trans_sq += (ax.translation() - xb.translation()).squaredNorm();
    }
    result.rotation_residual = std::sqrt(rot_sq / static_cast<double>(pairs.size()));
    result.translation_residual = std::sqrt(trans_sq / static_cast<double>(pairs.size()));
    return result;
}

namespace {

HomogeneousTransform random_rigid(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.2, 1.5), trans(-0.1, 0.1);
    Eigen::Vector3d axis(gauss(rng), gauss(rng), gauss(rng));
    axis.normalize();
    return {rotation_exp(axis * angle(rng)), Eigen::Vector3d(trans(rng), trans(rng), trans(rng))};
}

// Pose of the instrument shaft for an RCM mechanism pivoting about the base origin.
HomogeneousTransform rcm_pose(double j1, double j2, double insertion) {
    return HomogeneousTransform::rot_y(j1) * HomogeneousTransform::rot_x(-j2) *
           HomogeneousTransform::from_translation(Eigen::Vector3d(0, 0, -insertion));
}

}  // namespace

std::vector<MotionPair> generate_handeye_dataset(const HomogeneousTransform& X_true, const DatasetOptions& options) {
    if (options.n_motions < 2) throw PreconditionError("hand-eye dataset needs at least two motions");
    if (!(options.noise.rot_std >= 0.0) || !(options.noise.trans_std >= 0.0))
        throw PreconditionError("noise standard deviations must be non-negative");

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> pivot(-0.6, 0.6), insertion(0.05, 0.2);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<MotionPair> pairs;
    pairs.reserve(options.n_motions);
    const double j1_fixed = pivot(rng), j2_fixed = pivot(rng);
    for (std::size_t i = 0; i < options.n_motions; ++i) {
        HomogeneousTransform b;
        if (options.rcm_constrained) {
            auto draw = [&] {
                const double j1 = options.insertion_only ? j1_fixed : pivot(rng);
                const double j2 = options.insertion_only ? j2_fixed : pivot(rng);
                return rcm_pose(j1, j2, insertion(rng));
            };
            const auto from = draw();
            const auto to = draw();
            b = to * from.inverse();
        } else {
            b = random_rigid(rng);
        }
        HomogeneousTransform a = X_true * b * X_true.inverse();
        if (options.noise.rot_std > 0.0 || options.noise.trans_std > 0.0) {
            const Eigen::Vector3d dw(gauss(rng), gauss(rng), gauss(rng));
            const Eigen::Vector3d dt(gauss(rng), gauss(rng), gauss(rng));
            a = HomogeneousTransform(a.rotation() * rotation_exp(dw * options.noise.rot_std),
                                     a.translation() + dt * options.noise.trans_std);
        }
        pairs.push_back({a, b});
    }
    return pairs;
}

HomogeneousTransform compensated_tip_pose(const HomogeneousTransform& cT0hat, const KinematicChain& chain,
                                          const OffsetErrorVector& delta, const JointVector& q) {
    return cT0hat * tip_pose(chain, apply_offset_errors(q, delta));
}

HomogeneousTransform tilted_handeye(const HomogeneousTransform& cT0_true, double delta1) {
    return cT0_true * delta1_closed_form(delta1).inverse();
}

}  // namespace psmkit
