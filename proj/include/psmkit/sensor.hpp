#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "psmkit/chain.hpp"

namespace psmkit {

enum class Interpolation { Linear, CubicSpline };

/// Monotone 1-D correction table. Between knots it interpolates linearly or
/// with a clamped cubic spline; beyond the end knots it extrapolates along the
/// end tangent. Outputs must be strictly increasing so the table is invertible.
class LookupTable {
public:
    LookupTable(std::vector<std::pair<double, double>> knots, Interpolation mode = Interpolation::Linear);

    double operator()(double x) const;
    /// Input x with operator()(x) == y, found by bracketing on the knots.
    double inverse(double y) const;

    const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }
    Interpolation interpolation() const noexcept { return mode_; }

private:
    double slope_at_left() const;
    double slope_at_right() const;

    std::vector<std::pair<double, double>> knots_;
    Interpolation mode_;
    std::vector<double> second_derivs_;  // spline only
};

struct AdcRange {
    double min = -5.0;
    double max = 5.0;
};

/// beta_P = k_P * correct(P) + b_P
struct PotentiometerModel {
    double k_P = 1.0;  // rad/V (m/V for prismatic)
    double b_P = 0.0;  // rad (m)
    std::optional<LookupTable> nonlinearity;
    double noise_std = 0.0;  // V
    AdcRange adc_range{};
    int adc_bits = 12;

    /// Throws ValidationError if k_P == 0, the range is empty, noise < 0 or bits outside [1, 32].
    void validate() const;
    double adc_step() const;
    double correct(double volts) const { return nonlinearity ? (*nonlinearity)(volts) : volts; }
};

/// beta_E = k_E * E + b_E
struct EncoderModel {
    double k_E = 1e-4;  // rad/count
    double b_E = 0.0;   // rad
    std::int64_t counts_min = -(std::int64_t{1} << 31);
    std::int64_t counts_max = (std::int64_t{1} << 31) - 1;

    void validate() const;
};

struct ActuatorSensorModel {
    PotentiometerModel pot;
    EncoderModel enc;
    double true_position = 0.0;  // rad, simulation ground truth
};

struct SensorReadings {
    double P = 0.0;       // V, quantized
    std::int64_t E = 0;   // counts
};

double actuator_from_pot(const PotentiometerModel& model, double P);
double actuator_from_enc(const EncoderModel& model, std::int64_t E);

/// Synthesizes the ADC voltage and encoder count an actuator at `true_beta`
/// would produce. Gaussian voltage noise is drawn from `seed`; the noisy
/// voltage saturates at the ADC rails. Throws OutOfRangeError when the
/// noise-free voltage or the count is unreachable.
SensorReadings simulate_readings(double true_beta, const ActuatorSensorModel& model, std::uint64_t seed);

/// q = C * G^-1 * beta
class CouplingModel {
public:
    static constexpr double kMaxCondition = 1e6;

    /// Throws ValidationError on dimension mismatch, zero gear ratio or
    /// condition number >= 1e6.
    CouplingModel(Eigen::MatrixXd coupling_matrix, Eigen::VectorXd gear_ratios);
    static CouplingModel identity(std::size_t n);

    const Eigen::MatrixXd& coupling_matrix() const noexcept { return coupling_; }
    const Eigen::VectorXd& gear_ratios() const noexcept { return gear_ratios_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(gear_ratios_.size()); }

private:
    Eigen::MatrixXd coupling_;
    Eigen::VectorXd gear_ratios_;
};

JointVector joints_from_actuators(const CouplingModel& coupling, const Eigen::VectorXd& beta);
Eigen::VectorXd actuators_from_joints(const CouplingModel& coupling, const JointVector& q);

struct SafetyStatus {
    bool tripped = false;
    double discrepancy = 0.0;
};

/// 5 degrees.
inline constexpr double kDefaultSafetyThreshold = 0.08726646259971647;

/// Trips iff |beta_E - beta_P| > threshold (strict).
SafetyStatus safety_check(double beta_E, double beta_P, double threshold = kDefaultSafetyThreshold);

}  // namespace psmkit
