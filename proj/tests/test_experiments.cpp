#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "psmkit/error.hpp"
#include "psmkit/experiments.hpp"

using namespace psmkit;

TEST_CASE("reference trajectory") {
    const auto chain = bundled_psm_chain();
    const auto traj = generate_reference_trajectory(chain);
    REQUIRE(traj.size() == 1000);
    JointVector first(7);
    first << -std::numbers::pi / 5, -std::numbers::pi / 6, 0.2, 0, 0, 0, 0;
    CHECK(traj.front() == first);
    CHECK(traj.back() == -first + JointVector::Unit(7, 2) * 0.4);
    const JointVector mid = 0.5 * (traj[499] + traj[500]);
    CHECK(mid.cwiseAbs().maxCoeff() == doctest::Approx(0.2));
    CHECK(std::abs(mid[0]) < 1e-15);
    CHECK(std::abs(mid[1]) < 1e-15);
    for (const auto& q : traj) REQUIRE(q[2] == 0.2);
}

TEST_CASE("interpolate_trajectory") {
    const auto t = interpolate_trajectory({Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 3), 5});
    REQUIRE(t.size() == 5);
    CHECK(t[2] == Eigen::Vector2d(0.5, 2));
    CHECK_THROWS_AS(interpolate_trajectory({Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 3), 1}), PreconditionError);
    CHECK_THROWS_AS(interpolate_trajectory({Eigen::Vector2d(0, 1), Eigen::Vector3d(1, 3, 0), 4}), PreconditionError);
}

TEST_CASE("trajectory RMSE reproduces the experiment") {
    const auto chain = bundled_psm_chain();
    const std::vector<double> e2{0.0, 0.25, 1.0, 2.0, 3.0};
    const auto r = trajectory_rmse_experiment(chain, e2);
    REQUIRE(r.size() == 5);
    CHECK(r[0].rmse == 0.0);
    CHECK(r[1].rmse == doctest::Approx(0.8888082165).epsilon(1e-8));
    CHECK(r[2].rmse == doctest::Approx(3.5551905620375415).epsilon(1e-10));
    CHECK(r[3].rmse == doctest::Approx(7.110110382549301).epsilon(1e-10));
    CHECK(r[4].rmse == doctest::Approx(10.664488740627522).epsilon(1e-10));
    CHECK(r[2].rmse >= 3.2);
    CHECK(r[2].rmse <= 3.6);
    CHECK(r[4].rmse > 10.0);
    for (const auto& x : r) {
        double sq = 0.0;
        for (double e : x.per_point_errors) sq += e * e;
        CHECK(std::sqrt(sq / static_cast<double>(x.per_point_errors.size())) == doctest::Approx(x.rmse));
    }
}

TEST_CASE("RMSE is linear in e2") {
    const auto chain = bundled_psm_chain();
    std::vector<double> e2;
    for (int i = 1; i <= 12; ++i) e2.push_back(0.25 * i);
    const auto r = trajectory_rmse_experiment(chain, e2);
    std::vector<double> y;
    for (const auto& x : r) y.push_back(x.rmse);
    const auto fit = fit_line(e2, y);
    CHECK(fit.r_squared > 0.999);
    CHECK(std::abs(fit.intercept) < 0.05);
}

TEST_CASE("RMSE is invariant under reversal") {
    const auto chain = bundled_psm_chain();
    auto traj = generate_reference_trajectory(chain);
    const double forward = trajectory_rmse(chain, traj, 1.0).rmse;
    std::reverse(traj.begin(), traj.end());
    CHECK(trajectory_rmse(chain, traj, 1.0).rmse == doctest::Approx(forward).epsilon(1e-13));
}

TEST_CASE("chain without tool constants is rejected") {
    auto desc = nlohmann::json::parse(bundled_psm_description());
    desc.erase("tool_constants");
    const auto chain = load_chain(desc.dump());
    CHECK_THROWS_AS(trajectory_rmse_experiment(chain, std::vector<double>{1.0}), ConfigurationError);
}

TEST_CASE("fit_line") {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2));
    CHECK(f.intercept == doctest::Approx(1));
    CHECK(f.r_squared == doctest::Approx(1));
    CHECK_THROWS_AS(fit_line(std::vector<double>{1}, std::vector<double>{1}), PreconditionError);
}
