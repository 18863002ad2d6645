#include <doctest.h>

#include <numbers>

#include "psmkit/error.hpp"
#include "test_support.hpp"

using namespace psmkit;
using std::numbers::pi;

namespace {

DhRow psm_row(int n) {
    switch (n) {
        case 1: return {pi / 2, 0.0, 0.0, pi / 2, JointKind::Revolute, 0};
        case 2: return {-pi / 2, 0.0, 0.0, -pi / 2, JointKind::Revolute, 1};
        default: return {pi / 2, 0.0, -0.4318, 0.0, JointKind::Prismatic, 2};
    }
}

}  // namespace

TEST_CASE("dh_transform of an all-zero row is the identity") {
    CHECK(dh_transform(DhRow{}, 0.0).matrix() == Eigen::Matrix4d::Identity());
}

TEST_CASE("dh_transform PSM row 1 at q = -pi/2 is Rx(pi/2)") {
    const auto t = dh_transform(psm_row(1), -pi / 2);
    Eigen::Matrix3d expected;
    expected << 1, 0, 0, 0, 0, -1, 0, 1, 0;
    CHECK((t.rotation() - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(t.translation().norm() < 1e-15);
}

TEST_CASE("dh_transform PSM row 3 at q = L_Rcc has d = 0") {
    const auto t = dh_transform(psm_row(3), 0.4318);
    Eigen::Matrix3d expected;
    expected << 1, 0, 0, 0, 0, -1, 0, 1, 0;
    CHECK((t.rotation() - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(t.translation().norm() < 1e-15);
}

TEST_CASE("prismatic row translation is affine in q with unit slope") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto row = psm_row(3);
    for (int i = 0; i < 10000; ++i) {
        const double q1 = u(rng), q2 = u(rng);
        const Eigen::Vector3d diff = dh_transform(row, q2).translation() - dh_transform(row, q1).translation();
        REQUIRE(diff.norm() == doctest::Approx(std::abs(q2 - q1)).epsilon(1e-12));
    }
}

TEST_CASE("two-row PSM chain at q = 0 matches the hand-multiplied product") {
    // Rx(pi/2) Rz(pi/2) Rx(-pi/2) Rz(-pi/2), multiplied out by hand.
    const KinematicChain chain("psm2", {psm_row(1), psm_row(2)});
    Eigen::Matrix4d expected;
    expected << 0, 0, -1, 0,
                -1, 0, 0, 0,
                0, 1, 0, 0,
                0, 0, 0, 1;
    const auto fk = forward_kinematics(chain, Eigen::Vector2d(0, 0));
    CHECK(testing::max_abs_diff(fk.tip.matrix(), expected) < 1e-15);
    CHECK(fk.frames.size() == 2);
}

TEST_CASE("three-row PSM chain tip sits |q3 - L_Rcc| from the RCM") {
    const KinematicChain chain("psm3", {psm_row(1), psm_row(2), psm_row(3)});
    const auto tip = tip_pose(chain, Eigen::Vector3d(0, 0, 0.2));
    CHECK(tip.translation().norm() == doctest::Approx(0.2318).epsilon(1e-12));
    // Brute-force product: the shaft points along +z of the base at j1 = j2 = 0.
    CHECK(tip.translation().z() == doctest::Approx(0.2318).epsilon(1e-12));
}

TEST_CASE("FK frames satisfy the recursion and the tip inverts") {
    const auto chain = bundled_psm_chain();
    std::mt19937_64 rng(21);
    for (int i = 0; i < 10000; ++i) {
        const JointVector q = testing::random_joints(chain, rng);
        const auto fk = forward_kinematics(chain, q);
        for (std::size_t k = 1; k < fk.frames.size(); ++k) {
            const auto& row = chain.rows()[k];
            const auto expect = fk.frames[k - 1] * dh_transform(row, q[static_cast<Eigen::Index>(*row.joint)]);
            REQUIRE(testing::max_abs_diff(fk.frames[k].matrix(), expect.matrix()) == 0.0);
        }
        REQUIRE(testing::max_abs_diff((fk.tip.inverse() * fk.tip).matrix(), Eigen::Matrix4d::Identity()) < 1e-12);
        REQUIRE(fk.tip.is_rigid(1e-9));
    }
}

TEST_CASE("FK rejects joint limit violations with the joint index") {
    const auto chain = bundled_psm_chain();
    JointVector q = JointVector::Zero(7);
    q[2] = 0.3;  // insertion limit is 0.24 m
    try {
        forward_kinematics(chain, q);
        FAIL("expected a limit violation");
    } catch (const JointLimitError& e) {
        CHECK(e.joint() == 2);
    }
    CHECK_THROWS_AS(forward_kinematics(chain, JointVector::Zero(3)), PreconditionError);
}

TEST_CASE("default joint limits") {
    auto prismatic = psm_row(3);
    prismatic.joint = 1;
    const KinematicChain chain("c", {psm_row(1), prismatic});
    CHECK(chain.limits()[0].min == -pi);
    CHECK(chain.limits()[0].max == pi);
    CHECK(chain.limits()[1].min == 0.0);
    CHECK(chain.limits()[1].max == 0.24);
}

TEST_CASE("bundled PSM description loads as a 7-joint chain") {
    const auto chain = bundled_psm_chain();
    CHECK(chain.joint_count() == 7);
    CHECK(chain.rows()[0].alpha_prev == doctest::Approx(pi / 2));
    CHECK(chain.rows()[0].theta_offset == doctest::Approx(pi / 2));
    CHECK(chain.rows()[1].alpha_prev == doctest::Approx(-pi / 2));
    CHECK(chain.rows()[1].theta_offset == doctest::Approx(-pi / 2));
    CHECK(chain.rows()[2].kind == JointKind::Prismatic);
    CHECK(chain.rows()[2].d == doctest::Approx(-chain.tool_constant("L_Rcc")));
    CHECK(chain.tool_constant("L_Rcc") == 0.4318);
    CHECK(chain.tool_constant("L_tool") == 0.4162);
    CHECK_THROWS_AS(chain.tool_constant("nope"), ConfigurationError);
}

TEST_CASE("load_chain validation") {
    CHECK_THROWS_AS(load_chain(R"({"name": "x", "rows": []})"), ValidationError);
    CHECK_THROWS_AS(load_chain(R"({"name": "x"})"), ParseError);
    CHECK_THROWS_AS(load_chain("{not json"), ParseError);

    const char* duplicate = R"({"rows": [
        {"alpha_prev": 0, "a_prev": 0, "d": 0, "theta_offset": 0, "kind": "revolute", "joint": 0},
        {"alpha_prev": 0, "a_prev": 0, "d": 0, "theta_offset": 0, "kind": "revolute", "joint": 0}]})";
    CHECK_THROWS_AS(load_chain(duplicate), ValidationError);

    const char* gap = R"({"rows": [
        {"alpha_prev": 0, "a_prev": 0, "d": 0, "theta_offset": 0, "kind": "revolute", "joint": 0},
        {"alpha_prev": 0, "a_prev": 0, "d": 0, "theta_offset": 0, "kind": "revolute", "joint": 2}]})";
    CHECK_THROWS_AS(load_chain(gap), ValidationError);

    const char* missing_field = R"({"rows": [{"alpha_prev": 0, "d": 0, "theta_offset": 0, "joint": 0}]})";
    try {
        load_chain(missing_field);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.field() == "rows[0].a_prev");
    }

    const char* bad_kind = R"({"rows": [{"alpha_prev": 0, "a_prev": 0, "d": 0, "theta_offset": 0, "kind": "ball", "joint": 0}]})";
    CHECK_THROWS_AS(load_chain(bad_kind), ParseError);
}

TEST_CASE("fixed rows carry no joint variable") {
    const char* doc = R"({"rows": [
        {"alpha_prev": 0, "a_prev": 0, "d": 0, "theta_offset": 0, "kind": "revolute", "joint": 0},
        {"alpha_prev": 0, "a_prev": 0.5, "d": 0, "theta_offset": 0, "kind": "fixed"}]})";
    const auto chain = load_chain(doc);
    CHECK(chain.joint_count() == 1);
    const auto tip = tip_pose(chain, JointVector::Constant(1, pi / 2));
    CHECK((tip.translation() - Eigen::Vector3d(0, 0.5, 0)).norm() < 1e-15);
}

TEST_CASE("chain JSON round trip") {
    const auto chain = bundled_psm_chain();
    const auto again = load_chain(chain_to_json(chain));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto q = testing::random_joints(chain, rng);
        CHECK(tip_pose(chain, q).matrix() == tip_pose(again, q).matrix());
    }
}
