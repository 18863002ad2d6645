#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "psmkit/calibration.hpp"
#include "psmkit/camera.hpp"
#include "psmkit/experiments.hpp"
#include "psmkit/handeye.hpp"
#include "psmkit/offset_analysis.hpp"
#include "psmkit/sensor.hpp"

namespace psmkit::io {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// --- Calibration file -------------------------------------------------------
// { "actuators": [ { "k_P", "b_P", "k_E", "b_E", "nonlinearity_knots": [[in, out], ...],
//                    "interpolation": "linear" | "spline", "noise_std", "adc_bits",
//                    "adc_range": [min, max] } ... ],
//   "coupling_matrix": [[...], ...], "gear_ratios": [...] }

struct CalibrationFile {
    std::vector<ActuatorSensorModel> actuators;
    CouplingModel coupling = CouplingModel::identity(1);
};

CalibrationFile parse_calibration(std::string_view json_text);
std::string calibration_to_json(const CalibrationFile& file);

// --- Camera files -----------------------------------------------------------

PinholeCamera parse_camera(std::string_view json_text);
std::string camera_to_json(const PinholeCamera& camera);
/// { "left": {camera}, "right": {camera}, "left_to_right": 4x4 row-major }
StereoRig parse_stereo_rig(std::string_view json_text);
std::string stereo_rig_to_json(const StereoRig& rig);

// --- Motion pairs -----------------------------------------------------------
// Either a bare array of { "A": 4x4, "B": 4x4 } or { "metadata": {...}, "pairs": [...] }.

std::vector<MotionPair> parse_motion_pairs(std::string_view json_text);
std::string motion_pairs_to_json(const std::vector<MotionPair>& pairs, std::uint64_t seed);

HomogeneousTransform parse_transform(std::string_view json_text);
std::string transform_to_json(const HomogeneousTransform& t);

// --- Reports ----------------------------------------------------------------

std::string constancy_report_to_json(const ConstancyReport& report, const KinematicChain& chain,
                                     const OffsetErrorVector& delta, std::span<const JointVector> samples, int depth);
std::string verification_report_to_json(const VerificationReport& report);
std::string handeye_result_to_json(const HandEyeResult& result);
std::string bp3_result_to_json(const Bp3SearchResult& result, double true_error);
std::string rmse_results_to_json(const std::vector<RmseResult>& results, std::string_view chain_name);

/// Header "e2_deg,rmse_mm", one row per result, full precision.
std::string rmse_results_to_csv(const std::vector<RmseResult>& results);

// --- CSV --------------------------------------------------------------------

/// Numeric CSV; a first line containing any non-numeric field is treated as a header.
std::vector<std::vector<double>> parse_numeric_csv(std::string_view text);

/// Comma-separated list of doubles, e.g. "0,1,2.5".
std::vector<double> parse_number_list(std::string_view text);

}  // namespace psmkit::io
