#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psmkit/camera.hpp"
#include "psmkit/chain.hpp"
#include "psmkit/sensor.hpp"

namespace psmkit {

/// Encoder offset computed at power-on from the potentiometer:
/// b_E = -k_E * E + k_P * P + b_P.
double calibrate_encoder_offset(double k_E, std::int64_t E, double k_P, double P, double b_P);

/// Same, but routes P through the potentiometer model (including any
/// nonlinearity correction).
double calibrate_encoder_offset(const PotentiometerModel& pot, double k_E, std::int64_t E, double P);

struct ScaleCalibrationSample {
    std::int64_t E = 0;
    double P = 0.0;
    std::string label;
};

inline constexpr double kDefaultMinScaleSweep = 0.1;  // V

/// Potentiometer scale from encoder/potentiometer pairs. Two samples use
/// k_P = k_E (E2 - E1) / (P2 - P1); more use the least-squares slope of
/// k_E * E against P. Throws DegenerateMotionError if the voltage sweep is
/// below `min_sweep`.
double calibrate_pot_scale(std::span<const ScaleCalibrationSample> samples, double k_E,
                           double min_sweep = kDefaultMinScaleSweep);

/// b_P = -k_P * P for an actuator held at its zero position.
double calibrate_pot_offset_zero(double k_P, double P_at_zero);
/// Averages repeated readings taken at the zero position.
double calibrate_pot_offset_zero(double k_P, std::span<const double> readings_at_zero);

/// Builds a measured-to-reference correction table from (reference, measured)
/// pairs. Reference values must be strictly increasing and the measured values
/// strictly increasing with them.
LookupTable fit_nonlinearity_table(std::span<const std::pair<double, double>> reference_measured,
                                   Interpolation mode = Interpolation::Linear);

/// Optional pixel-space observer for the RCM technique.
struct CameraObserver {
    PinholeCamera camera;
    HomogeneousTransform camera_from_base;
};

struct Bp3SearchOptions {
    double search_range = 0.015;  // m, half-width around the nominal RCM insertion
    double tol = 1e-4;            // m
    std::size_t bracket_samples = 41;
    std::optional<CameraObserver> observer;
};

struct Bp3SearchResult {
    double estimated_b_P3 = 0.0;   // m, actual minus reported insertion
    double residual_motion = 0.0;  // m (pixels with a camera observer)
    double insertion_tested = 0.0; // m, reported insertion at the optimum
};

/// Reported insertion that places the joint 4/5 reference point on the RCM.
double nominal_rcm_insertion(const KinematicChain& chain);

/// Reference point (midpoint of the joint 4 and joint 5 frame origins) for a
/// joint configuration, without limit checks.
Eigen::Vector3d rcm_reference_point(const KinematicChain& chain, const JointVector& q);

/// Simulates the RCM reference-point technique for the third potentiometer
/// offset: the actual insertion is the reported one plus `true_b_P3_error`.
/// Candidate reported insertions are scored by the largest pairwise excursion
/// of the reference point over the (j1, j2) sweep; a coarse grid verifies the
/// objective is unimodal, then golden-section search refines the minimum.
Bp3SearchResult calibrate_bp3_rcm(const KinematicChain& chain, double true_b_P3_error,
                                  std::span<const std::pair<double, double>> sweep,
                                  const Bp3SearchOptions& options = {});

/// Default (j1, j2) sweep: a 3x3 grid over +-0.3 rad.
std::vector<std::pair<double, double>> default_rcm_sweep();

struct VerificationReport {
    std::vector<double> max_discrepancy;  // rad, per actuator
    std::vector<bool> actuator_pass;
    double threshold = 0.0;
    bool pass = true;
};

/// Checks beta_E ~ beta_P for every actuator across `configs`. Readings are
/// simulated with `truth` and decoded with `calibrated`; joint configurations
/// map to actuator positions through `coupling`.
VerificationReport verify_calibration(std::span<const ActuatorSensorModel> truth,
                                      std::span<const ActuatorSensorModel> calibrated,
                                      std::span<const JointVector> configs, const CouplingModel& coupling,
                                      double threshold = kDefaultSafetyThreshold, std::uint64_t seed = 0);

/// Perfect-knowledge overload with an identity coupling.
VerificationReport verify_calibration(std::span<const ActuatorSensorModel> models,
                                      std::span<const JointVector> configs,
                                      double threshold = kDefaultSafetyThreshold, std::uint64_t seed = 0);

}  // namespace psmkit
