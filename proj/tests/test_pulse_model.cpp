#include <doctest.h>

#include <random>

#include "cpulse/errors.hpp"
#include "cpulse/pulse_model.hpp"
#include "oracles.hpp"

using namespace cpulse;

namespace {

void check_axis_angle(const Rotation& q, const Vec3& axis, double angle, double tol) {
    CHECK(equivalent(q, rot_from_axis_angle(axis, angle), tol));
}

}  // namespace

TEST_CASE("error-free and pure-scaling pulses") {
    check_axis_angle(pulse_propagator({deg(90), deg(90)}, kNoError), {0, 1, 0}, deg(90), 1e-15);
    check_axis_angle(pulse_propagator({deg(90), 0}, {0, 1.1}), {1, 0, 0}, deg(99), 1e-15);
    CHECK(equivalent(pulse_propagator({deg(90), 0}, {0, 0}), Rotation::identity()));
}

TEST_CASE("a 0.15 offset tilts the axis and lengthens the rotation") {
    const AxisAngle aa = axis_angle(pulse_propagator({deg(90), 0}, {0.15, 1}));
    CHECK(to_degrees(aa.angle) == doctest::Approx(90.0 * std::sqrt(1.0225)).epsilon(1e-13));
    CHECK(to_degrees(aa.angle) == doctest::Approx(91.007).epsilon(1e-5));
    CHECK(to_degrees(std::asin(aa.axis.z)) == doctest::Approx(to_degrees(std::atan(0.15))).epsilon(1e-12));
    CHECK(to_degrees(std::asin(aa.axis.z)) == doctest::Approx(8.53).epsilon(1e-3));
}

TEST_CASE("sequences match an RK4 integration of the Bloch equations") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> flip(0.0, 2 * std::numbers::pi);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> off(-0.5, 0.5);
    std::uniform_real_distribution<double> rf(0.5, 1.5);
    for (int k = 0; k < 20; ++k) {
        PulseSequence seq;
        for (int i = 0; i < 3; ++i) seq.push_back({flip(rng), phase(rng)});
        const ErrorPoint e{off(rng), rf(rng)};
        const Eigen::Matrix3d expect = oracle::rk4_propagator(seq, e);
        CHECK((oracle::to_matrix(sequence_propagator(seq, e)) - expect).norm() < 1e-6);
    }
    const PulseSequence tycko{{deg(385), deg(90)}, {deg(320), deg(270)}, {deg(25), deg(90)}};
    check_axis_angle(sequence_propagator(tycko, kNoError), {0, 1, 0}, deg(90), 1e-12);
}

TEST_CASE("splitting a pulse does not change the propagator") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double theta = 6.0 * u(rng), phi = 6.0 * u(rng), frac = u(rng);
        const ErrorPoint e{u(rng) - 0.5, 0.5 + u(rng)};
        const PulseSequence split{{theta * frac, phi}, {theta * (1 - frac), phi}};
        CHECK(equivalent(sequence_propagator(split, e), pulse_propagator({theta, phi}, e), 1e-13));
        CHECK(equivalent(ideal_target(theta, phi), pulse_propagator({theta, phi}, kNoError), 1e-15));
    }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(make_pulse(-1.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(make_pulse(1.0, std::nan("")), PreconditionError);
    CHECK_THROWS_AS(sequence_propagator(PulseSequence{}, kNoError), PreconditionError);
    const PulseSequence one{{1.0, 0.0}};
    CHECK_THROWS_AS(trajectory(one, kNoError, {}, 1), PreconditionError);
}

TEST_CASE("trajectory samples") {
    const PulseSequence seq{{deg(90), 0}, {deg(180), deg(90)}};
    const Trajectory t = trajectory(seq, kNoError, {0, 0, 1}, 11);
    CHECK(t.samples.size() == 22);
    CHECK(t.samples.front().time_fraction == 0.0);
    CHECK(t.samples.back().time_fraction == doctest::Approx(1.0));
    CHECK(t.samples[10].segment == 0);
    CHECK(t.samples[11].segment == 1);
    CHECK(distance(t.samples[10].vector, t.samples[11].vector) < 1e-15);

    // 90x: z -> -y, then 180y: -y stays.
    CHECK(distance(t.samples[10].vector, {0, -1, 0}) < 1e-15);
    const BlochVector end = apply(sequence_propagator(seq, kNoError), BlochVector{0, 0, 1});
    CHECK(distance(t.final_vector(), end) < 1e-15);

    for (const auto& s : t.samples) CHECK(s.vector.norm() == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < t.samples.size(); ++i) {
        CHECK(t.samples[i].time_fraction >= t.samples[i - 1].time_fraction);
    }

    const Trajectory off = trajectory(seq, {0.2, 0.9}, {0, 0, 1}, 5);
    CHECK(distance(off.final_vector(), apply(sequence_propagator(seq, {0.2, 0.9}), BlochVector{0, 0, 1})) < 1e-15);
}
