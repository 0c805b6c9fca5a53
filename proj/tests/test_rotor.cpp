#include <doctest.h>

#include <random>

#include <Eigen/Geometry>

#include "cpulse/errors.hpp"
#include "cpulse/rotor.hpp"
#include "oracles.hpp"

using namespace cpulse;

TEST_CASE("axis-angle round trip for the convention anchors") {
    const Rotation q = rot_from_axis_angle({1, 0, 0}, deg(90));
    CHECK(q.w() == doctest::Approx(std::cos(deg(45))).epsilon(1e-15));
    CHECK(q.x() == doctest::Approx(std::sin(deg(45))).epsilon(1e-15));

    const Vec3 v = apply(rot_from_axis_angle({0, 0, 1}, deg(90)), Vec3{1, 0, 0});
    CHECK(v.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.y == doctest::Approx(1.0).epsilon(1e-15));

    const Vec3 u = apply(rot_from_axis_angle({0, 1, 0}, deg(90)), Vec3{0, 0, 1});
    CHECK((u - Vec3{1, 0, 0}).norm() < 1e-15);

    CHECK_THROWS_AS(rot_from_axis_angle({1, 1, 0}, 1.0), PreconditionError);
    CHECK_THROWS_AS(Rotation::from_components(0, 0, 0, 0), PreconditionError);
}

TEST_CASE("same-axis composition adds angles") {
    const Rotation x90 = rot_from_axis_angle({1, 0, 0}, deg(90));
    CHECK(equivalent(compose(x90, x90), rot_from_axis_angle({1, 0, 0}, deg(180))));
}

TEST_CASE("180x then 180y is 180z against the matrix product") {
    const Rotation q = compose(rot_from_axis_angle({1, 0, 0}, deg(180)), rot_from_axis_angle({0, 1, 0}, deg(180)));
    const Eigen::Matrix3d m = oracle::axis_angle_matrix({0, 1, 0}, deg(180)) * oracle::axis_angle_matrix({1, 0, 0}, deg(180));
    CHECK((oracle::to_matrix(q) - m).norm() < 1e-14);
    CHECK(equivalent(q, rot_from_axis_angle({0, 0, 1}, deg(180))));
}

TEST_CASE("120 degrees about the body diagonal permutes the axes") {
    const Vec3 n = Vec3{1, 1, 1} * (1.0 / std::sqrt(3.0));
    const Rotation q = rot_from_axis_angle(n, deg(120));
    const Vec3 v = apply(q, Vec3{1, 0, 0});
    CHECK((v - Vec3{0, 1, 0}).norm() < 1e-14);
    const Eigen::Vector3d e = oracle::axis_angle_matrix(n, deg(120)) * Eigen::Vector3d(1, 0, 0);
    CHECK((Eigen::Vector3d(v.x, v.y, v.z) - e).norm() < 1e-14);
}

TEST_CASE("axis_angle reports angles in [0, pi] and the z axis for the identity") {
    const AxisAngle id = axis_angle(Rotation::identity());
    CHECK(id.angle == 0.0);
    CHECK(id.axis.z == 1.0);

    const AxisAngle aa = axis_angle(rot_from_axis_angle({0, 0, 1}, deg(270)));
    CHECK(aa.angle == doctest::Approx(deg(90)).epsilon(1e-14));
    CHECK(aa.axis.z == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("random rotations: group properties and matrix homomorphism") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
        const Rotation a = oracle::random_rotation(rng);
        const Rotation b = oracle::random_rotation(rng);
        const Rotation c = oracle::random_rotation(rng);
        const Vec3 v = oracle::random_unit(rng);

        CHECK(equivalent(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-13));
        CHECK(equivalent(compose(a, a.inverse()), Rotation::identity(), 1e-13));

        const Vec3 lhs = apply(compose(a, b), v);
        const Vec3 rhs = apply(b, apply(a, v));
        CHECK((lhs - rhs).norm() < 1e-13);

        const Eigen::Matrix3d m = oracle::to_matrix(b) * oracle::to_matrix(a);
        CHECK((oracle::to_matrix(compose(a, b)) - m).norm() < 1e-13);

        CHECK(apply(a, v).norm() == doctest::Approx(1.0).epsilon(1e-14));

        const AxisAngle aa = axis_angle(a);
        CHECK(aa.angle >= 0.0);
        CHECK(aa.angle <= std::numbers::pi + 1e-15);
        CHECK(equivalent(rot_from_axis_angle(aa.axis, aa.angle), a, 1e-12));
        CHECK(equivalent(rot_from_vector(rotation_vector(a)), a, 1e-12));

        CHECK(quaternion_overlap(a, a.negated()) == doctest::Approx(1.0).epsilon(1e-14));
    }
}
