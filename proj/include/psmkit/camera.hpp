#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psmkit/transform.hpp"

namespace psmkit {

/// Radial (k1, k2, k3) and tangential (p1, p2) coefficients applied to
/// normalized coordinates: x_d = x (1 + k1 r^2 + k2 r^4 + k3 r^6) + 2 p1 x y + p2 (r^2 + 2 x^2).
struct Distortion {
    double k1 = 0.0, k2 = 0.0, p1 = 0.0, p2 = 0.0, k3 = 0.0;
    bool is_zero() const noexcept { return k1 == 0 && k2 == 0 && p1 == 0 && p2 == 0 && k3 == 0; }
};

struct PinholeCamera {
    double fx = 1.0, fy = 1.0;  // px
    double cx = 0.0, cy = 0.0;  // px
    Distortion distortion{};
    int width = 1, height = 1;  // px

    /// Throws ValidationError unless fx, fy > 0 and the principal point lies in the image.
    void validate() const;

    /// Applies the distortion model to normalized coordinates.
    Eigen::Vector2d distort_normalized(const Eigen::Vector2d& xy) const;
};

struct StereoRig {
    PinholeCamera left;
    PinholeCamera right;
    HomogeneousTransform left_to_right;  // maps left-camera coordinates into the right camera
};

using Pixel = Eigen::Vector2d;

/// Throws PreconditionError for points with z <= 0.
Pixel project(const PinholeCamera& camera, const Eigen::Vector3d& point);

/// Ideal (undistorted) pixel for an observed pixel, by fixed-point iteration
/// on the normalized coordinates. Throws ConvergenceError.
Pixel undistort_point(const PinholeCamera& camera, const Pixel& observed, int max_iterations = 200);

/// Forward distortion of an ideal pixel; inverse of undistort_point.
Pixel distort_pixel(const PinholeCamera& camera, const Pixel& ideal);

struct LineCheck {
    double max_deviation = 0.0;  // px
    bool pass = true;
};

/// Projects collinear 3-D points, fits a 2-D line by total least squares and
/// reports the largest perpendicular deviation.
LineCheck straight_line_check(const PinholeCamera& camera, std::span<const Eigen::Vector3d> collinear_points,
                              double line_fit_tolerance = 0.5);

struct StereoMatch {
    Pixel left;
    Pixel right;
};

struct RowCheck {
    double max_row_difference = 0.0;  // px
    bool pass = true;
};

/// Largest |vL - vR| over matched keypoints in rectified images.
RowCheck rectified_row_check(const StereoRig& rig, std::span<const StereoMatch> matches, double threshold = 1.0);

/// Synthetic rectified matches: each point (left-camera frame) is projected
/// into both cameras of `rig`; distortion is ignored.
std::vector<StereoMatch> synthesize_stereo_matches(const StereoRig& rig, std::span<const Eigen::Vector3d> points);

struct ReprojectionReport {
    double rms = 0.0;                    // px
    std::vector<double> residuals;       // px, per correspondence
    std::vector<std::size_t> outliers;   // residual > 3 * rms
};

struct Correspondence {
    Eigen::Vector3d point;  // camera frame, m
    Pixel observed;
};

ReprojectionReport reprojection_error(const PinholeCamera& camera, std::span<const Correspondence> correspondences);

/// 8-bit grayscale image, row-major.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RasterImage() = default;
    RasterImage(int w, int h, std::uint8_t fill = 0);

    std::uint8_t& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
    void validate() const;
    bool operator==(const RasterImage&) const = default;
};

enum class Field { Even, Odd };

/// Keeps the rows of `field` and rebuilds every other row as the rounded-half-up
/// mean of its two kept neighbours; a boundary row copies its single neighbour.
RasterImage deinterlace(const RasterImage& image, Field field);

RasterImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const RasterImage& image);
RasterImage decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const RasterImage& image);

}  // namespace psmkit
