#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace psmkit {

/// Rigid transform with an implicit [0 0 0 1] bottom row. Rotation is kept as
/// given; `is_rigid` checks it and `normalized` re-orthogonalizes on request.
class HomogeneousTransform {
public:
    static constexpr double kRigidTolerance = 1e-9;

    HomogeneousTransform() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
    HomogeneousTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
        : rotation_(rotation), translation_(translation) {}

    static HomogeneousTransform identity() { return {}; }
    static HomogeneousTransform from_translation(const Eigen::Vector3d& t) {
        return {Eigen::Matrix3d::Identity(), t};
    }
    static HomogeneousTransform from_rotation(const Eigen::Matrix3d& r) { return {r, Eigen::Vector3d::Zero()}; }
    static HomogeneousTransform rot_x(double angle);
    static HomogeneousTransform rot_y(double angle);
    static HomogeneousTransform rot_z(double angle);

    /// Builds from a 4x4 matrix; throws ValidationError unless the bottom row
    /// is [0 0 0 1] and the rotation block is proper orthonormal within `tol`.
    static HomogeneousTransform from_matrix(const Eigen::Matrix4d& m, double tol = kRigidTolerance);

    const Eigen::Matrix3d& rotation() const noexcept { return rotation_; }
    const Eigen::Vector3d& translation() const noexcept { return translation_; }
    Eigen::Matrix4d matrix() const;

    HomogeneousTransform inverse() const { return {rotation_.transpose(), -rotation_.transpose() * translation_}; }
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }

    friend HomogeneousTransform operator*(const HomogeneousTransform& a, const HomogeneousTransform& b) {
        return {a.rotation_ * b.rotation_, a.rotation_ * b.translation_ + a.translation_};
    }

    /// Frobenius deviation of R^T R from identity, plus |det R - 1|.
    double orthonormality_error() const;
    bool is_rigid(double tol = kRigidTolerance) const { return orthonormality_error() <= tol; }

    /// Nearest proper rotation (SVD projection); translation unchanged.
    HomogeneousTransform normalized() const;

private:
    Eigen::Matrix3d rotation_;
    Eigen::Vector3d translation_;
};

/// Frobenius norm of the difference of the two 4x4 matrices.
double frobenius_distance(const HomogeneousTransform& a, const HomogeneousTransform& b);

/// Angle of the relative rotation a^T b, in [0, pi].
double rotation_angle_between(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

/// Rotation vector (axis * angle) of a proper rotation.
Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r);
Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& w);

}  // namespace psmkit
