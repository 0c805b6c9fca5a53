#include <doctest.h>

#include <cmath>

#include "cpulse/errors.hpp"
#include "cpulse/fidelity.hpp"
#include "cpulse/magnus.hpp"
#include "cpulse/synth.hpp"
#include "oracles.hpp"

using namespace cpulse;

namespace {

// Independent closed-form evaluation, written from scratch in degrees.
struct Angles {
    double t1, t2, t3;
};

Angles reference_angles(double theta_deg) {
    const double c = std::cos(theta_deg * std::numbers::pi / 180.0);
    const double s = std::sin(theta_deg * std::numbers::pi / 180.0);
    const double arg = ((1 - c) * (1 - c) + std::sqrt((1 - c) * (7 + c)) * s) / (4 * (1 - c));
    const double t1 = std::acos(arg) * 180.0 / std::numbers::pi + 360.0;
    const double t3 = t1 - 360.0;
    return {t1, t1 + t3 - theta_deg, t3};
}

void check_degrees(const PulseSequence& seq, double a, double b, double c, double tol) {
    REQUIRE(seq.size() == 3);
    CHECK(std::abs(to_degrees(seq[0].flip) - a) <= tol);
    CHECK(std::abs(to_degrees(seq[1].flip) - b) <= tol);
    CHECK(std::abs(to_degrees(seq[2].flip) - c) <= tol);
}

double signed_flip(const Pulse& p, double phi) {
    return std::cos(p.phase - phi) > 0 ? p.flip : -p.flip;
}

}  // namespace

TEST_CASE("90 degree target") {
    const PulseSequence seq = tycko_family(deg(90));
    const Angles ref = reference_angles(90);
    check_degrees(seq, ref.t1, ref.t2, ref.t3, 1e-9);
    check_degrees(seq, 384.30, 318.59, 24.30, 0.005);
    check_degrees(seq, 385, 320, 25, 2.0);
    CHECK(seq[0].phase == doctest::Approx(0.0));
    CHECK(seq[1].phase == doctest::Approx(std::numbers::pi));
    CHECK(seq[2].phase == doctest::Approx(0.0));
}

TEST_CASE("60 and 180 degree targets") {
    const Angles ref = reference_angles(60);
    check_degrees(tycko_family(deg(60)), ref.t1, ref.t2, ref.t3, 1e-9);
    check_degrees(tycko_family(deg(60)), 375.53, 331.05, 15.53, 0.02);
    check_degrees(tycko_family(deg(60)), 375, 331, 15, 1.0);
    check_degrees(tycko_family(deg(180)), 420, 300, 60, 1e-9);
}

TEST_CASE("zero-error exactness and the angle constraint over a theta grid") {
    for (int d = 10; d <= 350; d += 10) {
        SynthParams p;
        p.theta = deg(d);
        p.phi = deg(d % 7 * 20);
        const SynthAngles a = synth_angles(p);
        CHECK(a.theta2 == a.theta1 + a.theta3 - p.theta);
        CHECK(std::fmod(std::abs(a.theta3 - a.theta1), 2 * std::numbers::pi) ==
              doctest::Approx(0.0).epsilon(1e-12));

        const PulseSequence seq = synthesize(p);
        CHECK(fidelity(sequence_propagator(seq, kNoError), ideal_target(p.theta, p.phi)) >= 1 - 1e-12);
        CHECK(oracle::trace_fidelity(oracle::su2_sequence(seq, kNoError),
                                     oracle::su2(Eigen::Vector3d(std::cos(p.phi), std::sin(p.phi), 0), p.theta)) >=
              1 - 1e-12);
    }
}

TEST_CASE("the two closed forms agree on (0, 180)") {
    for (double d = 1; d < 180; d += 1) {
        const PulseSequence a = tycko_family(deg(d));
        const PulseSequence b = arcsin_family(deg(d));
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(signed_flip(a[i], 0) - signed_flip(b[i], 0)) < 1e-9);
        }
    }
}

TEST_CASE("first-order offset immunity") {
    for (int d = 10; d <= 170; d += 10) {
        CHECK(first_order_error(tycko_family(deg(d)), ErrorGenerator::OffsetZ).norm() < 1e-8);
        CHECK(first_order_error(arcsin_family(deg(d)), ErrorGenerator::OffsetZ).norm() < 1e-8);
    }
}

TEST_CASE("singular targets name the other family") {
    try {
        (void)tycko_family(deg(360));
        FAIL("expected a singular target error");
    } catch (const SingularTargetError& e) {
        CHECK(e.alternative() == Family::ArcsinZ);
    }
    try {
        (void)arcsin_family(std::numbers::pi - 1e-12);
        FAIL("expected a singular target error");
    } catch (const SingularTargetError& e) {
        CHECK(e.alternative() == Family::ArccosY);
    }
    CHECK_THROWS_AS((void)tycko_family(1e-6), SingularTargetError);
    CHECK_THROWS_AS((void)tycko_family(-1.0), PreconditionError);
    CHECK_THROWS_AS((void)tycko_family(7.0), PreconditionError);
}

TEST_CASE("alternate branches still satisfy the zero-error identity") {
    for (int outer : {1, -1}) {
        for (int root : {1, -1}) {
            for (int branch : {1, -1}) {
                for (int n : {0, 1, 2}) {
                    SynthParams p{deg(75), deg(30), n, Family::ArccosY, outer, root, branch};
                    const SynthAngles a = synth_angles(p);
                    CHECK(a.theta2 == a.theta1 + a.theta3 - p.theta);
                    CHECK(fidelity(sequence_propagator(synthesize(p), kNoError), ideal_target(p.theta, p.phi)) >=
                          1 - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("catalog") {
    const NamedSequence& t = named_sequence("tycko90");
    CHECK(to_degrees(t.target_flip) == doctest::Approx(90));
    CHECK(to_degrees(t.sequence[1].flip) == doctest::Approx(320));
    CHECK(std::cos(t.sequence[1].phase - t.sequence[0].phase) == doctest::Approx(-1));
    CHECK(fidelity(sequence_propagator(t.sequence, kNoError), ideal_target(t.target_flip, t.target_phase)) >
          1 - 1e-12);

    const NamedSequence& s = named_sequence("starcuk180");
    CHECK(to_degrees(s.sequence[2].flip) == doctest::Approx(315));
    CHECK(fidelity(sequence_propagator(s.sequence, kNoError), ideal_target(deg(180), 0)) > 1 - 1e-12);

    // The printed 60 degree sequence nets 59 degrees.
    const NamedSequence& n = named_sequence("new60");
    CHECK(to_degrees(n.sequence[0].flip) == doctest::Approx(375));
    const AxisAngle aa = axis_angle(sequence_propagator(n.sequence, kNoError));
    CHECK(to_degrees(aa.angle) == doctest::Approx(59));

    CHECK(named_sequence("tycko90").x_referenced()[0].phase == doctest::Approx(0.0));
    CHECK_THROWS_AS(named_sequence("nope"), PreconditionError);
    CHECK(named_sequences().size() == 3);
}

TEST_CASE("refinement at the analytic optimum returns the start") {
    const PulseSequence init = tycko_family(deg(90));
    const RefineResult r = refine_search(deg(90), 0.0, FirstOrderNorm{}, init);
    CHECK(r.initial_objective < 1e-8);
    CHECK(r.objective <= r.initial_objective);
    CHECK(first_order_error(r.sequence, ErrorGenerator::OffsetZ).norm() < 1e-8);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(r.sequence[i].flip - init[i].flip) < deg(0.01));
}

TEST_CASE("refinement recovers the analytic angles from a perturbed start") {
    const double theta = deg(120);
    const SynthAngles exact = synth_angles({theta});
    SynthAngles start = exact;
    start.theta1 += deg(5);
    start.theta2 = start.theta1 + start.theta3 - theta;
    const RefineResult r = refine_search(theta, 0.0, FirstOrderNorm{}, to_sequence(start, 0.0));
    CHECK(r.objective < r.initial_objective);
    CHECK(std::abs(to_degrees(r.theta1 - exact.theta1)) < 0.5);
    CHECK(std::abs(to_degrees(r.theta3 - exact.theta3)) < 0.5);
    CHECK(r.sequence[1].flip == doctest::Approx(r.theta1 + r.theta3 - theta).epsilon(1e-15));
}

TEST_CASE("offset-targeted refinement does not lose fidelity at the chosen points") {
    const std::vector<ErrorPoint> pts{{0.2, 1.0}, {-0.2, 1.0}};
    const PulseSequence init = tycko_family(deg(90));
    const RefineResult r = refine_search(deg(90), 0.0, FidelityAtPoints{pts, {}}, init);
    const Rotation target = ideal_target(deg(90), 0);
    auto mean = [&](const PulseSequence& s) {
        double m = 0;
        for (const ErrorPoint& e : pts) m += fidelity(sequence_propagator(s, e), target);
        return m / pts.size();
    };
    CHECK(mean(r.sequence) >= mean(init));
    CHECK(r.objective <= r.initial_objective);
}

TEST_CASE("rough angles still compensate when the constraint is kept") {
    const double theta = deg(90);
    const SynthAngles exact = synth_angles({theta});
    const ErrorPoint e{0.1, 1.0};
    const double plain = fidelity(pulse_propagator({theta, 0}, e), ideal_target(theta, 0));
    for (double d : {-3.0, -1.5, 1.5, 3.0}) {
        SynthAngles a = exact;
        a.theta1 += deg(d);
        a.theta2 = a.theta1 + a.theta3 - theta;
        CHECK(fidelity(sequence_propagator(to_sequence(a, 0), e), ideal_target(theta, 0)) > plain);
    }
}
