#include <doctest.h>

#include <cmath>
#include <random>

#include "psmkit/calibration.hpp"
#include "psmkit/error.hpp"
#include "test_support.hpp"

using namespace psmkit;

TEST_CASE("encoder offset") {
    CHECK(calibrate_encoder_offset(0.001, 0, 1, 0, 0) == 0.0);
    CHECK(calibrate_encoder_offset(0.001, 1000, 2, 1, -1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("encoder offset end to end stays within the ADC bound") {
    ActuatorSensorModel truth;
    truth.pot.k_P = 0.9;
    truth.pot.b_P = 0.12;
    truth.enc.k_E = 2e-5;
    truth.enc.b_E = 1.7;  // unknown after power-on
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> beta(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const double power_on = beta(rng);
        const auto r = simulate_readings(power_on, truth, 0);
        EncoderModel enc = truth.enc;
        enc.b_E = calibrate_encoder_offset(truth.enc.k_E, r.E, truth.pot.k_P, r.P, truth.pot.b_P);
        const double later = beta(rng);
        const double decoded = actuator_from_enc(enc, simulate_readings(later, truth, 0).E);
        REQUIRE(std::abs(decoded - later) <= truth.enc.k_E + 0.5 * truth.pot.adc_step() * truth.pot.k_P + 1e-12);
    }
}

TEST_CASE("pot scale from two samples") {
    const std::vector<ScaleCalibrationSample> s{{0, 1.0, "t1"}, {1000, 2.0, "t2"}};
    CHECK(calibrate_pot_scale(s, 0.001) == doctest::Approx(1.0).epsilon(1e-15));
    const std::vector<ScaleCalibrationSample> same{{0, 1.0, "t1"}, {1000, 1.0, "t2"}};
    CHECK_THROWS_AS(calibrate_pot_scale(same, 0.001), DegenerateMotionError);
    const std::vector<ScaleCalibrationSample> small{{0, 1.0, "t1"}, {1000, 1.05, "t2"}};
    CHECK_THROWS_AS(calibrate_pot_scale(small, 0.001), DegenerateMotionError);
    CHECK_THROWS_AS(calibrate_pot_scale(std::vector<ScaleCalibrationSample>{{0, 1.0, ""}}, 0.001), PreconditionError);
}

TEST_CASE("least squares matches the two-point slope and ignores order") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> p(-4, 4);
    std::uniform_int_distribution<std::int64_t> e(-100000, 100000);
    for (int i = 0; i < 1000; ++i) {
        std::vector<ScaleCalibrationSample> s;
        for (int k = 0; k < 6; ++k) s.push_back({e(rng), p(rng), std::to_string(k)});
        const double forward = calibrate_pot_scale(s, 1e-4, 0.0);
        std::reverse(s.begin(), s.end());
        std::swap(s[1], s[4]);
        REQUIRE(calibrate_pot_scale(s, 1e-4, 0.0) == doctest::Approx(forward).epsilon(1e-12));

        // Two samples through the generic path vs the two-point slope.
        const std::vector<ScaleCalibrationSample> two{s[0], s[1]};
        const double two_point = 1e-4 * static_cast<double>(s[1].E - s[0].E) / (s[1].P - s[0].P);
        REQUIRE(calibrate_pot_scale(two, 1e-4, 0.0) == two_point);
    }
}

TEST_CASE("pot scale from 50 noisy samples within 1%") {
    ActuatorSensorModel truth;
    truth.pot.k_P = 1.5;
    truth.pot.b_P = 0.2;
    truth.pot.noise_std = 0.005;
    truth.enc.k_E = 1e-4;
    std::vector<ScaleCalibrationSample> s;
    for (int i = 0; i < 50; ++i) {
        const double beta = -5.0 + 10.0 * i / 49.0;
        const auto r = simulate_readings(beta, truth, 500 + static_cast<std::uint64_t>(i));
        s.push_back({r.E, r.P, std::to_string(i)});
    }
    CHECK(calibrate_pot_scale(s, truth.enc.k_E) == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("pot offset at the zero position") {
    CHECK(calibrate_pot_offset_zero(1, 0.5) == -0.5);
    CHECK(calibrate_pot_offset_zero(1, 0.0) == 0.0);

    ActuatorSensorModel truth;
    truth.pot.k_P = 1.1;
    truth.pot.b_P = -0.37;
    truth.pot.noise_std = 0.01;
    std::vector<double> readings;
    for (int i = 0; i < 100; ++i) readings.push_back(simulate_readings(0.0, truth, 77 + static_cast<std::uint64_t>(i)).P);
    const double bound = 3 * truth.pot.noise_std / std::sqrt(100.0) * truth.pot.k_P;
    CHECK(std::abs(calibrate_pot_offset_zero(truth.pot.k_P, readings) - truth.pot.b_P) < bound);
    CHECK_THROWS_AS(calibrate_pot_offset_zero(1.0, std::vector<double>{}), PreconditionError);
}

TEST_CASE("nonlinearity table: linear pairs give the identity") {
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 9; ++i) pairs.emplace_back(-4 + i, -4 + i);
    for (auto mode : {Interpolation::Linear, Interpolation::CubicSpline}) {
        const auto t = fit_nonlinearity_table(pairs, mode);
        for (double x = -4; x <= 4; x += 0.01) REQUIRE(std::abs(t(x) - x) < 1e-12);
    }
}

TEST_CASE("nonlinearity table: two knots give the affine map") {
    const std::vector<std::pair<double, double>> pairs{{0.0, 0.1}, {3.0, 2.9}};
    const auto t = fit_nonlinearity_table(pairs);
    for (double m = -1; m <= 4; m += 0.25) CHECK(t(m) == doctest::Approx((m - 0.1) * 3.0 / 2.8).epsilon(1e-13));
}

TEST_CASE("nonlinearity table: spline over a cubic distortion") {
    // Measured output = v + 0.05 (v - 1.5)^3 over a 0..3 V sweep; the table maps it back to v.
    auto distort = [](double v) { return v + 0.05 * std::pow(v - 1.5, 3); };
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 32; ++i) {
        const double v = 3.0 * i / 31.0;
        pairs.emplace_back(v, distort(v));
    }
    const auto t = fit_nonlinearity_table(pairs, Interpolation::CubicSpline);
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double v = 3.0 * i / 10000.0;
        worst = std::max(worst, std::abs(t(distort(v)) - v));
    }
    CHECK(worst < 1e-4 * 3.0);
}

TEST_CASE("nonlinearity table: rejects non-monotone measurements") {
    const std::vector<std::pair<double, double>> pairs{{0, 0}, {1, 1.2}, {2, 1.1}};
    CHECK_THROWS_AS(fit_nonlinearity_table(pairs), ValidationError);
    const std::vector<std::pair<double, double>> unsorted{{0, 0}, {0, 1}};
    CHECK_THROWS_AS(fit_nonlinearity_table(unsorted), PreconditionError);
}

TEST_CASE("RCM reference point is fixed under j1, j2 at the nominal insertion") {
    const auto chain = bundled_psm_chain();
    const double q_rcm = nominal_rcm_insertion(chain);
    CHECK(q_rcm == doctest::Approx(0.4318 - 0.4162).epsilon(1e-12));
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> j(-0.8, 0.8);
    JointVector q = JointVector::Zero(7);
    q[2] = q_rcm;
    const Eigen::Vector3d anchor = rcm_reference_point(chain, q);
    for (int i = 0; i < 10000; ++i) {
        q[0] = j(rng);
        q[1] = j(rng);
        REQUIRE((rcm_reference_point(chain, q) - anchor).norm() < 1e-12);
    }
}

TEST_CASE("b_P3 search") {
    const auto chain = bundled_psm_chain();
    const auto sweep = default_rcm_sweep();

    const auto zero = calibrate_bp3_rcm(chain, 0.0, sweep);
    CHECK(std::abs(zero.estimated_b_P3) < 1e-9);
    CHECK(zero.residual_motion < 1e-9);

    Bp3SearchOptions opts;
    opts.tol = 1e-4;
    const auto five = calibrate_bp3_rcm(chain, 0.005, sweep, opts);
    CHECK(std::abs(five.estimated_b_P3 - 0.005) < 1e-4);
    CHECK(five.residual_motion >= 0.0);

    const std::vector<std::pair<double, double>> single{{0.1, 0.1}, {0.1, 0.1}, {0.1, 0.1}};
    CHECK_THROWS_AS(calibrate_bp3_rcm(chain, 0.0, single), PreconditionError);

    Bp3SearchOptions narrow;
    narrow.search_range = 0.002;
    CHECK_THROWS_AS(calibrate_bp3_rcm(chain, 0.005, sweep, narrow), SearchError);
}

TEST_CASE("b_P3 search with a pixel-space observer") {
    const auto chain = bundled_psm_chain();
    Bp3SearchOptions opts;
    PinholeCamera cam;
    cam.fx = cam.fy = 800;
    cam.cx = 320;
    cam.cy = 240;
    cam.width = 640;
    cam.height = 480;
    opts.observer = CameraObserver{cam, HomogeneousTransform::from_translation({0.01, -0.02, 0.15})};
    const auto r = calibrate_bp3_rcm(chain, -0.004, default_rcm_sweep(), opts);
    CHECK(std::abs(r.estimated_b_P3 + 0.004) < 1e-4);
}

TEST_CASE("verify_calibration") {
    std::vector<ActuatorSensorModel> models(3);
    for (auto& m : models) {
        m.pot.k_P = 0.8;
        m.enc.k_E = 1e-5;
    }
    std::vector<JointVector> configs;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 20; ++i) configs.push_back(Eigen::Vector3d(u(rng), u(rng), u(rng)));

    const auto ok = verify_calibration(models, configs);
    const double quant = 0.5 * models[0].pot.adc_step() * 0.8 + 0.5e-5;
    for (double d : ok.max_discrepancy) CHECK(d <= quant + 1e-12);
    CHECK(ok.pass);

    auto wrong = models;
    wrong[1].enc.b_E += 0.01;
    const auto bad = verify_calibration(models, wrong, configs, CouplingModel::identity(3), 0.005);
    CHECK(bad.max_discrepancy[1] >= 0.01 - quant);
    CHECK(bad.max_discrepancy[0] <= quant + 1e-12);
    CHECK(bad.max_discrepancy[2] <= quant + 1e-12);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.actuator_pass[1]);

    CHECK_THROWS_AS(verify_calibration(models, std::vector<JointVector>{}), PreconditionError);
}
