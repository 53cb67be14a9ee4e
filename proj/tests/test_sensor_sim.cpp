#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "see/sensor_sim.hpp"
#include "test_support.hpp"

namespace see {
namespace {

SceneBounds everything() { return {Aabb{Vec3::Constant(-1e9), Vec3::Constant(1e9)}}; }

SensorSpec small_spec(int px, double sigma, std::uint64_t seed = 1) {
    SensorSpec s;
    s.fov = std::numbers::pi / 3;
    s.width = px;
    s.height = px;
    s.noise_sigma = sigma;
    s.seed = seed;
    return s;
}

TEST(Capture, ThreeByThreeOverPlate) {
    const TriangleMesh plate = shapes::plate(1.0, 1);
    const ViewPose pose{{0, 0, 1}, {0, 0, -1}};
    std::vector<Vec3> got = capture(pose, small_spec(3, 0), plate, everything());
    ASSERT_EQ(got.size(), 9u);
    // Pixel centres sit at -2/3, 0, 2/3 of the half-width tan(pi/6) on the image plane one metre away.
    const double t = 2.0 / 3.0 * std::tan(std::numbers::pi / 6);
    std::vector<Vec3> expect;
    for (double a : {-t, 0.0, t})
        for (double b : {-t, 0.0, t}) expect.emplace_back(a, b, 0.0);
    auto less = [](const Vec3& p, const Vec3& q) { return std::tie(p.x(), p.y()) < std::tie(q.x(), q.y()); };
    std::sort(got.begin(), got.end(), less);
    std::sort(expect.begin(), expect.end(), less);
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_NEAR((got[i] - expect[i]).norm(), 0.0, 1e-12) << got[i].transpose();
        EXPECT_LE(std::abs(got[i].x()), std::tan(std::numbers::pi / 6));
    }
}

TEST(Capture, MeshBehindSensorGivesNothing) {
    const TriangleMesh plate = shapes::plate(1.0, 1);
    EXPECT_TRUE(capture({{0, 0, 1}, {0, 0, 1}}, small_spec(16, 0.01), plate, everything()).empty());
}

TEST(Capture, BoundsFilter) {
    const TriangleMesh plate = shapes::plate(1.0, 1);
    const SceneBounds tight{Aabb{Vec3(-0.1, -0.1, -0.1), Vec3(0.1, 0.1, 0.1)}};
    const auto pts = capture({{0, 0, 1}, {0, 0, -1}}, small_spec(21, 0), plate, tight);
    EXPECT_FALSE(pts.empty());
    for (const Vec3& p : pts) EXPECT_TRUE(tight.box.contains(p));
    EXPECT_LT(pts.size(), 21u * 21u);
}

TEST(Capture, NoiseIsRangeNoiseWithRequestedSpread) {
    const TriangleMesh plate = shapes::plate(10.0, 1);
    const ViewPose pose{{0, 0, 1}, {0, 0, -1}};
    const SensorSpec spec = small_spec(100, 0.01, 42);
    const auto noisy = capture(pose, spec, plate, everything());
    ASSERT_EQ(noisy.size(), 10000u);
    double sum = 0, sq = 0;
    for (int row = 0, i = 0; row < 100; ++row) {
        for (int col = 0; col < 100; ++col, ++i) {
            const Vec3 dir = pixel_direction(pose, spec, col, row);
            const Vec3 d = noisy[i] - pose.position;
            // Displacement stays on the pixel ray.
            EXPECT_LE(d.cross(dir).norm(), 1e-12);
            const double exact = 1.0 / -dir.z();
            const double err = d.dot(dir) - exact;
            sum += err;
            sq += err * err;
        }
    }
    const double mean = sum / 1e4;
    const double sd = std::sqrt(sq / 1e4 - mean * mean);
    EXPECT_GE(sd, 0.0097);
    EXPECT_LE(sd, 0.0103);
    EXPECT_LT(std::abs(mean), 4 * 0.01 / 100);
}

TEST(Capture, DeterministicPerSeed) {
    const TriangleMesh sphere = shapes::sphere(0.5, 3);
    const ViewPose pose{{0, 0, 2}, {0, 0, -1}};
    EXPECT_EQ(capture(pose, small_spec(30, 0.01, 5), sphere, everything()),
              capture(pose, small_spec(30, 0.01, 5), sphere, everything()));
    EXPECT_NE(capture(pose, small_spec(30, 0.01, 5), sphere, everything()),
              capture(pose, small_spec(30, 0.01, 6), sphere, everything()));
}

TEST(Capture, NoiselessPointsLieOnTheMeshAndAreVisible) {
    Rng rng(4);
    const TriangleMesh meshes[] = {shapes::sphere(0.5, 3), shapes::cube(1.0, 4), shapes::right_angle(1.0, 4)};
    for (const TriangleMesh& mesh : meshes) {
        const double diag = mesh.bounds().diagonal();
        for (int v = 0; v < 4; ++v) {
            const Vec3 pos = mesh.bounds().center() + (diag / 2 + 1.0) * test::random_unit(rng);
            const ViewPose pose{pos, (mesh.bounds().center() - pos).normalized()};
            const auto pts = capture(pose, small_spec(24, 0), mesh, everything());
            ASSERT_FALSE(pts.empty());
            for (const Vec3& p : pts) {
                EXPECT_LE(mesh.distance_to_surface(p), 1e-9 * diag);
                const Vec3 back = p + 1e-6 * (pos - p).normalized();
                EXPECT_FALSE(path_blocked(pos, back, mesh));
            }
        }
    }
}

TEST(Capture, InvalidSpecRejected) {
    const TriangleMesh plate = shapes::plate(1.0, 1);
    SensorSpec s = small_spec(4, 0);
    s.width = 0;
    EXPECT_THROW(capture({{0, 0, 1}, {0, 0, -1}}, s, plate, everything()), InputError);
    s = small_spec(4, -1);
    EXPECT_THROW(capture({{0, 0, 1}, {0, 0, -1}}, s, plate, everything()), InputError);
    s = small_spec(4, 0);
    s.fov = std::numbers::pi;
    EXPECT_THROW(capture({{0, 0, 1}, {0, 0, -1}}, s, plate, everything()), InputError);
}

TEST(PathBlocked, Cases) {
    const TriangleMesh plate = shapes::plate(1.0, 1);
    EXPECT_TRUE(path_blocked({0, 0, 1}, {0, 0, -1}, plate));
    EXPECT_FALSE(path_blocked({0, 0, 1}, {1, 1, 1}, plate));
    // Grazing the plate edge counts as a collision.
    EXPECT_TRUE(path_blocked({0.5, 0, 1}, {0.5, 0, -1}, plate));
    EXPECT_THROW(path_blocked({1, 2, 3}, {1, 2, 3}, plate), InputError);
}

TEST(Sensor, ViewDistanceFromScene) {
    EXPECT_NEAR(view_distance_from_scene(shapes::cube(1.0, 1), 2.0), std::sqrt(3.0) / 2 + 2, 1e-15);
    EXPECT_THROW(view_distance_from_scene(shapes::cube(1.0, 1), -1), InputError);
}

TEST(Sensor, CameraUp) {
    EXPECT_EQ(camera_up({0, 0, -1}), Vec3(1, 0, 0));
    EXPECT_EQ(camera_up({0, 0, 1}), Vec3(1, 0, 0));
    const Vec3 up = camera_up(Vec3(1, 0, 1).normalized());
    EXPECT_NEAR(up.dot(Vec3(1, 0, 1).normalized()), 0, 1e-15);
    EXPECT_NEAR(up.norm(), 1, 1e-15);
    EXPECT_GT(up.z(), 0);
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const Vec3 d = test::random_unit(rng);
        const Vec3 u = camera_up(d);
        EXPECT_NEAR(u.norm(), 1, 1e-12);
        EXPECT_NEAR(u.dot(d), 0, 1e-12);
    }
}

TEST(Sensor, PixelDirectionsSpanTheFrustum) {
    const SensorSpec spec = small_spec(2, 0);
    const ViewPose pose{{0, 0, 0}, {0, 0, -1}};
    // right = dir x up = (0,0,-1) x (1,0,0) = (0,-1,0).
    const Vec3 top_left = pixel_direction(pose, spec, 0, 0);
    const double h = 0.5 * std::tan(std::numbers::pi / 6);
    EXPECT_NEAR((top_left - Vec3(h, h, -1).normalized()).norm(), 0, 1e-15);
}

} // namespace
} // namespace see
