#include "psmkit/transform.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "psmkit/error.hpp"

namespace psmkit {

HomogeneousTransform HomogeneousTransform::rot_x(double angle) {
    return from_rotation(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX()).toRotationMatrix());
}

HomogeneousTransform HomogeneousTransform::rot_y(double angle) {
    return from_rotation(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY()).toRotationMatrix());
}

HomogeneousTransform HomogeneousTransform::rot_z(double angle) {
    return from_rotation(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix());
}

HomogeneousTransform HomogeneousTransform::from_matrix(const Eigen::Matrix4d& m, double tol) {
    if (!m.allFinite()) throw ValidationError("transform contains non-finite entries");
    const Eigen::RowVector4d bottom = m.row(3);
    if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > tol)
        throw ValidationError("transform bottom row is not [0 0 0 1]");
    HomogeneousTransform t(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
    if (!t.is_rigid(tol)) throw ValidationError("transform rotation block is not a proper rotation");
    return t;
}

Eigen::Matrix4d HomogeneousTransform::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation_;
    m.topRightCorner<3, 1>() = translation_;
    return m;
}

double HomogeneousTransform::orthonormality_error() const {
    return (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity()).norm() +
           std::abs(rotation_.determinant() - 1.0);
}

HomogeneousTransform HomogeneousTransform::normalized() const {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation_, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
    return {svd.matrixU() * d * svd.matrixV().transpose(), translation_};
}

double frobenius_distance(const HomogeneousTransform& a, const HomogeneousTransform& b) {
    return (a.matrix() - b.matrix()).norm();
}

double rotation_angle_between(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    return rotation_log(a.transpose() * b).norm();
}

Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r) {
    const Eigen::AngleAxisd aa(r);
    return aa.axis() * aa.angle();
}

Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& w) {
    const double angle = w.norm();
    if (angle == 0.0) return Eigen::Matrix3d::Identity();
    return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

}  // namespace psmkit
