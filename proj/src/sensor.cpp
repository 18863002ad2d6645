#include "psmkit/sensor.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "psmkit/error.hpp"

namespace psmkit {

void PotentiometerModel::validate() const {
    if (k_P == 0.0 || !std::isfinite(k_P)) throw ValidationError("potentiometer k_P must be finite and non-zero");
    if (!std::isfinite(b_P)) throw ValidationError("potentiometer b_P must be finite");
    if (!(adc_range.min < adc_range.max)) throw ValidationError("ADC range min must be below max");
    if (!(noise_std >= 0.0)) throw ValidationError("potentiometer noise_std must be non-negative");
    if (adc_bits < 1 || adc_bits > 32) throw ValidationError("ADC bit depth must be in [1, 32]");
}

double PotentiometerModel::adc_step() const {
    return (adc_range.max - adc_range.min) / (std::ldexp(1.0, adc_bits) - 1.0);
}

void EncoderModel::validate() const {
    if (!(k_E > 0.0) || !std::isfinite(k_E)) throw ValidationError("encoder k_E must be positive");
    if (!std::isfinite(b_E)) throw ValidationError("encoder b_E must be finite");
    if (counts_min > counts_max) throw ValidationError("encoder count range is empty");
}

double actuator_from_pot(const PotentiometerModel& model, double P) {
    if (!(P >= model.adc_range.min && P <= model.adc_range.max))
        throw OutOfRangeError("potentiometer voltage " + std::to_string(P) + " outside ADC range");
    return model.k_P * model.correct(P) + model.b_P;
}

double actuator_from_enc(const EncoderModel& model, std::int64_t E) {
    if (E < model.counts_min || E > model.counts_max)
        throw OutOfRangeError("encoder count " + std::to_string(E) + " outside counter range");
    return model.k_E * static_cast<double>(E) + model.b_E;
}

SensorReadings simulate_readings(double true_beta, const ActuatorSensorModel& model, std::uint64_t seed) {
    const auto& pot = model.pot;
    const auto& enc = model.enc;
    pot.validate();
    enc.validate();

    const double linear = (true_beta - pot.b_P) / pot.k_P;
    const double ideal = pot.nonlinearity ? pot.nonlinearity->inverse(linear) : linear;
    if (!(ideal >= pot.adc_range.min && ideal <= pot.adc_range.max))
        throw OutOfRangeError("actuator position " + std::to_string(true_beta) +
                              " maps to an unreachable potentiometer voltage " + std::to_string(ideal));

    double volts = ideal;
    if (pot.noise_std > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, pot.noise_std);
        volts += noise(rng);
    }
    volts = std::clamp(volts, pot.adc_range.min, pot.adc_range.max);
    const double step = pot.adc_step();
    const double code = std::round((volts - pot.adc_range.min) / step);
    const double quantized = std::min(pot.adc_range.min + code * step, pot.adc_range.max);

    const double counts = std::round((true_beta - enc.b_E) / enc.k_E);
    if (!(counts >= static_cast<double>(enc.counts_min) && counts <= static_cast<double>(enc.counts_max)))
        throw OutOfRangeError("actuator position " + std::to_string(true_beta) + " overflows the encoder counter");
    return {quantized, static_cast<std::int64_t>(counts)};
}

CouplingModel::CouplingModel(Eigen::MatrixXd coupling_matrix, Eigen::VectorXd gear_ratios)
    : coupling_(std::move(coupling_matrix)), gear_ratios_(std::move(gear_ratios)) {
    if (coupling_.rows() != coupling_.cols() || coupling_.rows() != gear_ratios_.size() || coupling_.rows() == 0)
        throw ValidationError("coupling matrix must be n x n with n gear ratios");
    if (!coupling_.allFinite() || !gear_ratios_.allFinite()) throw ValidationError("coupling has non-finite entries");
    for (Eigen::Index i = 0; i < gear_ratios_.size(); ++i)
        if (gear_ratios_[i] == 0.0) throw ValidationError("gear ratio " + std::to_string(i) + " is zero");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(coupling_);
    const auto& s = svd.singularValues();
    const double smallest = s[s.size() - 1];
    if (!(smallest > 0.0) || s[0] / smallest >= kMaxCondition)
        throw ValidationError("coupling matrix is singular or ill-conditioned");
}

CouplingModel CouplingModel::identity(std::size_t n) {
    const auto size = static_cast<Eigen::Index>(n);
    return {Eigen::MatrixXd::Identity(size, size), Eigen::VectorXd::Ones(size)};
}

JointVector joints_from_actuators(const CouplingModel& coupling, const Eigen::VectorXd& beta) {
    if (static_cast<std::size_t>(beta.size()) != coupling.size())
        throw PreconditionError("actuator vector size does not match the coupling model");
    return coupling.coupling_matrix() * beta.cwiseQuotient(coupling.gear_ratios());
}

Eigen::VectorXd actuators_from_joints(const CouplingModel& coupling, const JointVector& q) {
    if (static_cast<std::size_t>(q.size()) != coupling.size())
        throw PreconditionError("joint vector size does not match the coupling model");
    return coupling.gear_ratios().cwiseProduct(coupling.coupling_matrix().partialPivLu().solve(q));
}

SafetyStatus safety_check(double beta_E, double beta_P, double threshold) {
    if (!(threshold > 0.0)) throw PreconditionError("safety threshold must be positive");
    const double diff = std::abs(beta_E - beta_P);
    return {diff > threshold, diff};
}

}  // namespace psmkit
