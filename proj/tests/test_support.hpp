#pragma once

#include <random>

#include "psmkit/chain.hpp"
#include "psmkit/transform.hpp"

namespace psmkit::testing {

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    return q.toRotationMatrix();
}

inline HomogeneousTransform random_transform(std::mt19937_64& rng, double trans_scale = 1.0) {
    std::uniform_real_distribution<double> u(-trans_scale, trans_scale);
    return {random_rotation(rng), Eigen::Vector3d(u(rng), u(rng), u(rng))};
}

/// Uniform joint vector inside the limits shrunk by `margin` on each side.
inline JointVector random_joints(const KinematicChain& chain, std::mt19937_64& rng, double margin = 0.0) {
    JointVector q(static_cast<Eigen::Index>(chain.joint_count()));
    for (std::size_t j = 0; j < chain.joint_count(); ++j) {
        const auto& l = chain.limits()[j];
        std::uniform_real_distribution<double> u(l.min + margin * (l.max - l.min), l.max - margin * (l.max - l.min));
        q[static_cast<Eigen::Index>(j)] = u(rng);
    }
    return q;
}

inline double max_abs_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace psmkit::testing
