#include "psmkit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psmkit/error.hpp"

namespace psmkit {

double calibrate_encoder_offset(double k_E, std::int64_t E, double k_P, double P, double b_P) {
    return -k_E * static_cast<double>(E) + k_P * P + b_P;
}

double calibrate_encoder_offset(const PotentiometerModel& pot, double k_E, std::int64_t E, double P) {
    return -k_E * static_cast<double>(E) + actuator_from_pot(pot, P);
}

double calibrate_pot_scale(std::span<const ScaleCalibrationSample> samples, double k_E, double min_sweep) {
    if (samples.size() < 2) throw PreconditionError("scale calibration needs at least two samples");
    if (!(k_E > 0.0)) throw PreconditionError("encoder scale k_E must be positive");

    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                              [](const auto& a, const auto& b) { return a.P < b.P; });
    const double sweep = hi->P - lo->P;
    if (!(sweep >= min_sweep) || sweep == 0.0)
        throw DegenerateMotionError("potentiometer sweep of " + std::to_string(sweep) +
                                        " V is too small; enforce a larger actuator motion",
                                    sweep);

    if (samples.size() == 2) {
        const auto& s1 = samples[0];
        const auto& s2 = samples[1];
        return k_E * static_cast<double>(s2.E - s1.E) / (s2.P - s1.P);
    }

    const double n = static_cast<double>(samples.size());
    double mean_p = 0.0, mean_b = 0.0;
    for (const auto& s : samples) {
        mean_p += s.P;
        mean_b += k_E * static_cast<double>(s.E);
    }
    mean_p /= n;
    mean_b /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& s : samples) {
        const double dp = s.P - mean_p;
        sxy += dp * (k_E * static_cast<double>(s.E) - mean_b);
        sxx += dp * dp;
    }
    return sxy / sxx;
}

double calibrate_pot_offset_zero(double k_P, double P_at_zero) { return -k_P * P_at_zero; }

double calibrate_pot_offset_zero(double k_P, std::span<const double> readings_at_zero) {
    if (readings_at_zero.empty()) throw PreconditionError("no readings at the zero position");
    const double mean = std::accumulate(readings_at_zero.begin(), readings_at_zero.end(), 0.0) /
                        static_cast<double>(readings_at_zero.size());
    return calibrate_pot_offset_zero(k_P, mean);
}

LookupTable fit_nonlinearity_table(std::span<const std::pair<double, double>> reference_measured,
                                   Interpolation mode) {
    if (reference_measured.size() < 2) throw PreconditionError("nonlinearity fit needs at least two pairs");
    std::vector<std::pair<double, double>> knots;
    knots.reserve(reference_measured.size());
    for (std::size_t i = 0; i < reference_measured.size(); ++i) {
        const auto [reference, measured] = reference_measured[i];
        if (i > 0 && !(reference > reference_measured[i - 1].first))
            throw PreconditionError("nonlinearity reference inputs must be strictly increasing");
        if (i > 0 && !(measured > reference_measured[i - 1].second))
            throw ValidationError("measured potentiometer output is not monotone at pair " + std::to_string(i));
        knots.emplace_back(measured, reference);
    }
    return LookupTable(std::move(knots), mode);
}

namespace {

constexpr std::size_t kInsertionJoint = 2;

JointVector rest_configuration(const KinematicChain& chain) {
    JointVector q = JointVector::Zero(static_cast<Eigen::Index>(chain.joint_count()));
    for (std::size_t j = 0; j < chain.joint_count(); ++j)
        q[j] = std::clamp(0.0, chain.limits()[j].min, chain.limits()[j].max);
    return q;
}

void require_rcm_chain(const KinematicChain& chain) {
    if (chain.joint_count() < 5) throw ConfigurationError("the RCM technique needs a chain with at least 5 joints");
    if (chain.joint_kind(kInsertionJoint) != JointKind::Prismatic)
        throw ConfigurationError("joint 3 must be the prismatic insertion joint");
}

Eigen::Vector3d rcm_point(const KinematicChain& chain, const JointVector& q) {
    // The RCM is the origin of the frame after joint 2, where the joint 1 and 2 axes meet.
    return partial_product(chain, q, chain.row_of_joint(1) + 1).translation();
}

}  // namespace

Eigen::Vector3d rcm_reference_point(const KinematicChain& chain, const JointVector& q) {
    const auto o4 = partial_product(chain, q, chain.row_of_joint(3) + 1).translation();
    const auto o5 = partial_product(chain, q, chain.row_of_joint(4) + 1).translation();
    return 0.5 * (o4 + o5);
}

double nominal_rcm_insertion(const KinematicChain& chain) {
    require_rcm_chain(chain);
    JointVector q = rest_configuration(chain);
    q[kInsertionJoint] = 0.0;
    const Eigen::Vector3d p0 = rcm_reference_point(chain, q);
    q[kInsertionJoint] = 1.0;
    const Eigen::Vector3d axis = rcm_reference_point(chain, q) - p0;
    return axis.dot(rcm_point(chain, q) - p0) / axis.squaredNorm();
}

std::vector<std::pair<double, double>> default_rcm_sweep() {
    std::vector<std::pair<double, double>> sweep;
    for (double j1 : {-0.3, 0.0, 0.3})
        for (double j2 : {-0.3, 0.0, 0.3}) sweep.emplace_back(j1, j2);
    return sweep;
}

Bp3SearchResult calibrate_bp3_rcm(const KinematicChain& chain, double true_b_P3_error,
                                  std::span<const std::pair<double, double>> sweep, const Bp3SearchOptions& options) {
    require_rcm_chain(chain);
    {
        std::vector<std::pair<double, double>> distinct(sweep.begin(), sweep.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() < 3)
            throw PreconditionError("the RCM sweep needs at least 3 distinct (j1, j2) configurations");
    }
    if (!(options.search_range > 0.0) || !(options.tol > 0.0))
        throw PreconditionError("search range and tolerance must be positive");
    if (options.bracket_samples < 5) throw PreconditionError("bracket check needs at least 5 samples");

    const JointVector rest = rest_configuration(chain);
    const double nominal = nominal_rcm_insertion(chain);
    const JointLimit lim = chain.limits()[kInsertionJoint];
    const double lo = std::max(nominal - options.search_range, lim.min);
    const double hi = std::min(nominal + options.search_range, lim.max);
    if (!(lo < hi)) throw SearchError("search range does not intersect the insertion joint limits");

    auto objective = [&](double reported) {
        std::vector<Eigen::Vector3d> refs;
        std::vector<Eigen::Vector2d> pixels;
        for (const auto& [j1, j2] : sweep) {
            JointVector q = rest;
            q[0] = j1;
            q[1] = j2;
            q[kInsertionJoint] = reported + true_b_P3_error;
            const Eigen::Vector3d p = rcm_reference_point(chain, q);
            if (options.observer)
                pixels.push_back(project(options.observer->camera, options.observer->camera_from_base.apply(p)));
            else
                refs.push_back(p);
        }
        double worst = 0.0;
        const std::size_t n = options.observer ? pixels.size() : refs.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                worst = std::max(worst, options.observer ? (pixels[a] - pixels[b]).norm() : (refs[a] - refs[b]).norm());
        return worst;
    };

    // Coarse grid: the objective must fall to a single interior minimum and rise after it.
    const std::size_t m = options.bracket_samples;
    std::vector<double> grid(m), values(m);
    for (std::size_t i = 0; i < m; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
        values[i] = objective(grid[i]);
    }
    const std::size_t best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    const double slack = 1e-12 * (*std::max_element(values.begin(), values.end()) + 1e-300);
    for (std::size_t i = 1; i <= best; ++i)
        if (values[i] > values[i - 1] + slack) throw SearchError("reference-point motion is not unimodal over the search range");
    for (std::size_t i = best + 1; i < m; ++i)
        if (values[i] < values[i - 1] - slack) throw SearchError("reference-point motion is not unimodal over the search range");
    if (best == 0 || best == m - 1)
        throw SearchError("minimum reference-point motion lies on the edge of the search range; widen it");

    // Golden-section refinement inside the bracketing grid cells.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = grid[best - 1], b = grid[best + 1];
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = objective(c), fd = objective(d);
    const double width_goal = std::min(options.tol * 1e-3, 1e-12);
    for (int iter = 0; iter < 200 && b - a > width_goal; ++iter) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    const double reported = 0.5 * (a + b);

    Bp3SearchResult result;
    result.insertion_tested = reported;
    result.residual_motion = objective(reported);
    result.estimated_b_P3 = nominal - reported;
    return result;
}

VerificationReport verify_calibration(std::span<const ActuatorSensorModel> truth,
                                      std::span<const ActuatorSensorModel> calibrated,
                                      std::span<const JointVector> configs, const CouplingModel& coupling,
                                      double threshold, std::uint64_t seed) {
    if (configs.empty()) throw PreconditionError("verification needs at least one joint configuration");
    if (truth.size() != calibrated.size() || truth.size() != coupling.size())
        throw PreconditionError("actuator model counts do not match the coupling model");
    if (!(threshold > 0.0)) throw PreconditionError("verification threshold must be positive");

    VerificationReport report;
    report.threshold = threshold;
    report.max_discrepancy.assign(truth.size(), 0.0);
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const Eigen::VectorXd beta = actuators_from_joints(coupling, configs[c]);
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const auto readings = simulate_readings(beta[static_cast<Eigen::Index>(i)], truth[i],
                                                    seed + c * truth.size() + i);
            const double beta_P = actuator_from_pot(calibrated[i].pot, readings.P);
            const double beta_E = actuator_from_enc(calibrated[i].enc, readings.E);
            report.max_discrepancy[i] = std::max(report.max_discrepancy[i], std::abs(beta_E - beta_P));
        }
    }
    for (double d : report.max_discrepancy) {
        report.actuator_pass.push_back(!safety_check(d, 0.0, threshold).tripped);
        report.pass = report.pass && report.actuator_pass.back();
    }
    return report;
}

VerificationReport verify_calibration(std::span<const ActuatorSensorModel> models,
                                      std::span<const JointVector> configs, double threshold, std::uint64_t seed) {
    return verify_calibration(models, models, configs, CouplingModel::identity(models.size()), threshold, seed);
}

}  // namespace psmkit
