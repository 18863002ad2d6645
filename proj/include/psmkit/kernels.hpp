#pragma once

// Data-parallel inner loops. `serial` is the reference implementation kept for
// testing and benchmarking; `omp` is what the public API calls. Both take the
// same inputs and must agree to the last bit on everything except reduction
// order (max reductions are order-independent, so they agree exactly too).

#include <span>
#include <vector>

#include "psmkit/camera.hpp"
#include "psmkit/chain.hpp"
#include "psmkit/offset_analysis.hpp"

namespace psmkit::kernels {

namespace serial {

/// Tip positions for every configuration; limits are checked for all points.
std::vector<Eigen::Vector3d> tip_positions(const KinematicChain& chain, std::span<const JointVector> configs);

/// Max pairwise Frobenius distance between realignment transforms.
double realignment_spread(const KinematicChain& chain, const OffsetErrorVector& delta,
                          std::span<const JointVector> configs, int depth);

RasterImage deinterlace(const RasterImage& image, Field field);

}  // namespace serial

namespace omp {

std::vector<Eigen::Vector3d> tip_positions(const KinematicChain& chain, std::span<const JointVector> configs);

double realignment_spread(const KinematicChain& chain, const OffsetErrorVector& delta,
                          std::span<const JointVector> configs, int depth);

RasterImage deinterlace(const RasterImage& image, Field field);

}  // namespace omp

/// Shared per-row rule: value of `row` after deinterlacing.
void deinterlace_row(const RasterImage& in, RasterImage& out, int row, Field field);

}  // namespace psmkit::kernels
