#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "psmkit/camera.hpp"
#include "psmkit/error.hpp"

using namespace psmkit;

namespace {

PinholeCamera vga(double k1 = 0.0) {
    PinholeCamera c;
    c.fx = c.fy = 1000;
    c.cx = 320;
    c.cy = 240;
    c.width = 640;
    c.height = 480;
    c.distortion.k1 = k1;
    return c;
}

RasterImage column(std::initializer_list<int> rows) {
    RasterImage img(1, static_cast<int>(rows.size()));
    int r = 0;
    for (int v : rows) img.at(r++, 0) = static_cast<std::uint8_t>(v);
    return img;
}

std::vector<int> rows_of(const RasterImage& img) {
    std::vector<int> out;
    for (int r = 0; r < img.height; ++r) out.push_back(img.at(r, 0));
    return out;
}

}  // namespace

TEST_CASE("project") {
    const auto cam = vga();
    CHECK(project(cam, {0, 0, 1}) == Pixel(320, 240));
    const Pixel p = project(cam, {0.1, 0, 1});
    CHECK(p.x() == doctest::Approx(420));
    CHECK(p.y() == doctest::Approx(240));
    CHECK(project(vga(0.1), {0.1, 0, 1}).x() > 420);
    CHECK_THROWS_AS(project(cam, {0, 0, 0}), PreconditionError);
    CHECK_THROWS_AS(project(cam, {0, 0, -1}), PreconditionError);
}

TEST_CASE("camera validation") {
    auto c = vga();
    c.fx = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = vga();
    c.cx = 640;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK_NOTHROW(vga().validate());
}

TEST_CASE("undistort") {
    const Pixel some(100.5, 37.25);
    CHECK((undistort_point(vga(), some) - some).norm() < 1e-12);
    CHECK((undistort_point(vga(0.2), Pixel(320, 240)) - Pixel(320, 240)).norm() == 0.0);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> k(-0.2, 0.2), u(0, 640), v(0, 480), small(-0.01, 0.01);
    for (int i = 0; i < 10000; ++i) {
        auto cam = vga(k(rng));
        cam.distortion.k2 = small(rng);
        cam.distortion.p1 = small(rng) * 0.1;
        cam.distortion.p2 = small(rng) * 0.1;
        const Pixel ideal(u(rng), v(rng));
        REQUIRE((undistort_point(cam, distort_pixel(cam, ideal)) - ideal).norm() < 1e-6);
        const Pixel observed(u(rng), v(rng));
        REQUIRE((distort_pixel(cam, undistort_point(cam, observed)) - observed).norm() < 1e-6);
    }
}

TEST_CASE("project then undistort recovers the pinhole pixel") {
    const auto cam = vga(0.1);
    const auto ideal = vga();
    for (double x = -0.3; x <= 0.3; x += 0.05)
        for (double y = -0.2; y <= 0.2; y += 0.05) {
            const Eigen::Vector3d p(x, y, 1.0);
            CHECK((undistort_point(cam, project(cam, p)) - project(ideal, p)).norm() < 1e-6);
        }
}

TEST_CASE("straight line check") {
    std::vector<Eigen::Vector3d> line;
    for (int i = 0; i <= 20; ++i) line.emplace_back(-0.3 + 0.03 * i, 0.2, 1.0);
    const auto clean = straight_line_check(vga(), line);
    CHECK(clean.max_deviation < 1e-9);
    CHECK(clean.pass);
    const auto bent = straight_line_check(vga(0.1), line);
    CHECK(bent.max_deviation > 1.0);
    CHECK_FALSE(bent.pass);

    std::vector<Eigen::Vector3d> oblique;
    for (int i = 0; i <= 10; ++i) oblique.emplace_back(0.1 * i - 0.5, 0.05 * i - 0.2, 1.0 + 0.2 * i);
    CHECK(straight_line_check(vga(), oblique).max_deviation < 1e-9);

    CHECK_THROWS_AS(straight_line_check(vga(), std::span(line).first(2)), PreconditionError);
    const std::vector<Eigen::Vector3d> same(3, Eigen::Vector3d(0, 0, 1));
    CHECK_THROWS_AS(straight_line_check(vga(), same), PreconditionError);
}

TEST_CASE("rectified row check") {
    StereoRig rig{vga(), vga(), HomogeneousTransform::from_translation({-0.005, 0, 0})};
    std::vector<Eigen::Vector3d> pts;
    for (double z : {0.05, 0.1, 0.2})
        for (double x = -0.02; x <= 0.02; x += 0.01) pts.emplace_back(x, 0.01, z);
    auto matches = synthesize_stereo_matches(rig, pts);
    CHECK(rectified_row_check(rig, matches).max_row_difference < 1e-9);

    matches[3].right.y() += 0.5;
    CHECK(rectified_row_check(rig, matches).max_row_difference == doctest::Approx(0.5));
    CHECK_THROWS_AS(rectified_row_check(rig, std::vector<StereoMatch>{}), PreconditionError);

    const double one_deg = std::numbers::pi / 180.0;
    StereoRig tilted{vga(), vga(),
                     HomogeneousTransform(HomogeneousTransform::rot_x(one_deg).rotation(), Eigen::Vector3d(-0.005, 0, 0))};
    CHECK(rectified_row_check(tilted, synthesize_stereo_matches(tilted, pts)).max_row_difference > 1.0);

    // A vertical baseline error gives a row offset proportional to disparity.
    StereoRig shifted{vga(), vga(), HomogeneousTransform::from_translation({-0.005, 0.0002, 0})};
    double previous = 0.0, previous_disparity = 0.0;
    for (double z : {0.3, 0.15, 0.075}) {
        const std::vector<Eigen::Vector3d> p{{0.0, 0.0, z}};
        const auto m = synthesize_stereo_matches(shifted, p);
        const double disparity = m[0].left.x() - m[0].right.x();
        const double rows = rectified_row_check(shifted, m).max_row_difference;
        CHECK(disparity > previous_disparity);
        CHECK(rows > previous);
        CHECK(rows / disparity == doctest::Approx(0.0002 / 0.005));
        previous = rows;
        previous_disparity = disparity;
    }
}

TEST_CASE("reprojection error") {
    const auto cam = vga(0.05);
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> x(-0.2, 0.2), z(0.5, 2.0);
    std::vector<Correspondence> c;
    for (int i = 0; i < 101; ++i) {
        const Eigen::Vector3d p(x(rng), x(rng), z(rng));
        c.push_back({p, project(cam, p)});
    }
    CHECK(reprojection_error(cam, c).rms == 0.0);
    c[17].observed.x() += 10.0;
    const auto r = reprojection_error(cam, c);
    REQUIRE(r.outliers.size() == 1);
    CHECK(r.outliers[0] == 17);
    CHECK(r.residuals[17] == doctest::Approx(10.0));

    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<Correspondence> noisy;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Vector3d p(x(rng), x(rng), z(rng));
        noisy.push_back({p, project(cam, p) + Pixel(noise(rng), noise(rng))});
    }
    CHECK(reprojection_error(cam, noisy).rms == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(0.2));
    CHECK_THROWS_AS(reprojection_error(cam, std::vector<Correspondence>{}), PreconditionError);
}

TEST_CASE("deinterlace examples") {
    const auto img = column({10, 200, 20, 220});
    CHECK(rows_of(deinterlace(img, Field::Even)) == std::vector<int>{10, 15, 20, 20});
    CHECK(rows_of(deinterlace(img, Field::Odd)) == std::vector<int>{200, 200, 210, 220});
    CHECK(rows_of(deinterlace(column({0, 9, 1}), Field::Even)) == std::vector<int>{0, 1, 1});  // 0.5 rounds up
    CHECK(rows_of(deinterlace(column({255, 0, 255}), Field::Even)) == std::vector<int>{255, 255, 255});

    const RasterImage flat(7, 5, 99);
    CHECK(deinterlace(flat, Field::Even) == flat);
    CHECK(deinterlace(flat, Field::Odd) == flat);
    CHECK_THROWS(deinterlace(RasterImage(3, 1), Field::Even));
}

TEST_CASE("deinterlace is idempotent") {
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<int> size(2, 12), px(0, 255);
    for (int i = 0; i < 10000; ++i) {
        RasterImage img(size(rng), size(rng));
        for (auto& p : img.pixels) p = static_cast<std::uint8_t>(px(rng));
        const Field f = i % 2 == 0 ? Field::Even : Field::Odd;
        const auto once = deinterlace(img, f);
        REQUIRE(deinterlace(once, f) == once);
    }
}

TEST_CASE("PGM round trip") {
    RasterImage img(5, 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 17);
    CHECK(decode_pgm(encode_pgm(img)) == img);

    const auto path = std::filesystem::temp_directory_path() / "psmkit_test_roundtrip.pgm";
    write_pgm(path.string(), img);
    CHECK(read_pgm(path.string()) == img);
    std::filesystem::remove(path);

    const std::string header = "P5\n# comment\n2 1\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    bytes.push_back(7);
    bytes.push_back(8);
    const auto parsed = decode_pgm(bytes);
    CHECK(parsed.width == 2);
    CHECK(parsed.at(0, 1) == 8);
    bytes.pop_back();
    CHECK_THROWS_AS(decode_pgm(bytes), ParseError);
    const std::string p2 = "P2\n1 1\n255\n0";
    CHECK_THROWS_AS(decode_pgm(std::vector<std::uint8_t>(p2.begin(), p2.end())), ParseError);
}
