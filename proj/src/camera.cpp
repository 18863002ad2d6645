#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "psmkit/camera.hpp"
#include "psmkit/error.hpp"

namespace psmkit {

void PinholeCamera::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw ValidationError("focal lengths must be positive");
    if (width <= 0 || height <= 0) throw ValidationError("image size must be positive");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
        throw ValidationError("principal point lies outside the image");
}

Eigen::Vector2d PinholeCamera::distort_normalized(const Eigen::Vector2d& xy) const {
    const double x = xy.x(), y = xy.y();
    const double r2 = x * x + y * y;
    const auto& d = distortion;
    const double radial = 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3));
    return {x * radial + 2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x),
            y * radial + d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y};
}

Pixel project(const PinholeCamera& camera, const Eigen::Vector3d& point) {
    if (!(point.z() > 0.0)) throw PreconditionError("point is behind the camera (z <= 0)");
    const Eigen::Vector2d xd = camera.distort_normalized(point.head<2>() / point.z());
    return {camera.fx * xd.x() + camera.cx, camera.fy * xd.y() + camera.cy};
}

Pixel distort_pixel(const PinholeCamera& camera, const Pixel& ideal) {
    const Eigen::Vector2d xy((ideal.x() - camera.cx) / camera.fx, (ideal.y() - camera.cy) / camera.fy);
    const Eigen::Vector2d xd = camera.distort_normalized(xy);
    return {camera.fx * xd.x() + camera.cx, camera.fy * xd.y() + camera.cy};
}

Pixel undistort_point(const PinholeCamera& camera, const Pixel& observed, int max_iterations) {
    const Eigen::Vector2d xd((observed.x() - camera.cx) / camera.fx, (observed.y() - camera.cy) / camera.fy);
    if (camera.distortion.is_zero()) return observed;

    const auto& d = camera.distortion;
    Eigen::Vector2d xy = xd;
    bool converged = false;
    for (int i = 0; i < max_iterations; ++i) {
        const double x = xy.x(), y = xy.y();
        const double r2 = x * x + y * y;
        const double radial = 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3));
        const Eigen::Vector2d tangential(2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x),
                                         d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y);
        const Eigen::Vector2d next = (xd - tangential) / radial;
        const double change = (next - xy).norm();
        xy = next;
        if (!xy.allFinite()) break;
        if (change < 1e-15) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        // Accept a fixed point that reproduces the observation to 1e-9 px even
        // if the last step did not shrink below the threshold.
        if (!xy.allFinite() || ((camera.distort_normalized(xy) - xd).cwiseProduct(Eigen::Vector2d(camera.fx, camera.fy)))
                                       .norm() > 1e-9)
            throw ConvergenceError("undistortion did not converge; distortion too strong for fixed-point iteration");
    }
    return {camera.fx * xy.x() + camera.cx, camera.fy * xy.y() + camera.cy};
}

LineCheck straight_line_check(const PinholeCamera& camera, std::span<const Eigen::Vector3d> collinear_points,
                              double line_fit_tolerance) {
    if (collinear_points.size() < 3) throw PreconditionError("straight-line check needs at least 3 points");
    std::vector<Pixel> px;
    px.reserve(collinear_points.size());
    for (const auto& p : collinear_points) px.push_back(project(camera, p));

    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (const auto& p : px) centroid += p;
    centroid /= static_cast<double>(px.size());
    Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
    for (const auto& p : px) scatter += (p - centroid) * (p - centroid).transpose();
    if (scatter.trace() < 1e-18) throw PreconditionError("projected points coincide; no line to fit");

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
    const Eigen::Vector2d normal = eig.eigenvectors().col(0);  // smallest eigenvalue

    LineCheck out;
    for (const auto& p : px) out.max_deviation = std::max(out.max_deviation, std::abs(normal.dot(p - centroid)));
    out.pass = out.max_deviation <= line_fit_tolerance;
    return out;
}

RowCheck rectified_row_check(const StereoRig&, std::span<const StereoMatch> matches, double threshold) {
    if (matches.empty()) throw PreconditionError("row check needs at least one match");
    RowCheck out;
    for (const auto& m : matches) out.max_row_difference = std::max(out.max_row_difference, std::abs(m.left.y() - m.right.y()));
    out.pass = out.max_row_difference <= threshold;
    return out;
}

std::vector<StereoMatch> synthesize_stereo_matches(const StereoRig& rig, std::span<const Eigen::Vector3d> points) {
    PinholeCamera left = rig.left, right = rig.right;
    left.distortion = {};
    right.distortion = {};
    std::vector<StereoMatch> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({project(left, p), project(right, rig.left_to_right.apply(p))});
    return out;
}

ReprojectionReport reprojection_error(const PinholeCamera& camera, std::span<const Correspondence> correspondences) {
    if (correspondences.empty()) throw PreconditionError("reprojection error needs at least one correspondence");
    ReprojectionReport out;
    double sq = 0.0;
    for (const auto& c : correspondences) {
        const double r = (project(camera, c.point) - c.observed).norm();
        out.residuals.push_back(r);
        sq += r * r;
    }
    out.rms = std::sqrt(sq / static_cast<double>(correspondences.size()));
    for (std::size_t i = 0; i < out.residuals.size(); ++i)
        if (out.residuals[i] > 3.0 * out.rms) out.outliers.push_back(i);
    return out;
}

}  // namespace psmkit
