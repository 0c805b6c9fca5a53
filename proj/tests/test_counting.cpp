#include <doctest.h>

#include <sstream>

#include "cpulse/counting.hpp"
#include "cpulse/errors.hpp"
#include "cpulse/synth.hpp"

using namespace cpulse;
using namespace cpulse::counting;

namespace {

SpinPair on_resonance() {
    SpinPair sp;
    sp.delta_nu_hz = 0.0;
    return sp;
}

std::size_t count_role(const Program& prog, PulseRole role) {
    std::size_t n = 0;
    for (const Instruction& ins : prog) {
        if (const auto* hp = std::get_if<HardPulse>(&ins); hp && hp->role == role) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("gate oracle") {
    for (int r = 0; r <= 10; ++r) {
        CHECK(gate_oracle(MatchFunction::F00, r) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gate_oracle(MatchFunction::F11, r) == doctest::Approx(r % 2 == 0 ? 1.0 : -1.0).epsilon(1e-12));
        for (MatchFunction f : kAllMatchFunctions) {
            CHECK(std::abs(gate_oracle(f, r) - gate_closed_form(f, r)) < 1e-12);
        }
    }
    const double f01[] = {1, 0, -1, 0};
    for (int r = 0; r < 4; ++r) CHECK(std::abs(gate_oracle(MatchFunction::F01, r) - f01[r]) < 1e-12);
    CHECK_THROWS_AS(gate_oracle(MatchFunction::F00, -1), PreconditionError);
}

TEST_CASE("match functions") {
    CHECK(match_count(MatchFunction::F00) == 0);
    CHECK(match_count(MatchFunction::F01) == 1);
    CHECK(match_value(MatchFunction::F01, 0) == 1);
    CHECK(match_value(MatchFunction::F10, 1) == 1);
    CHECK(parse_match("f10") == MatchFunction::F10);
    CHECK_THROWS_AS(parse_match("f2"), PreconditionError);
}

TEST_CASE("preparation alone gives full intensity") {
    const SpinPair sp = on_resonance();
    const Program prog = compile_counting(MatchFunction::F00, 0, sp);
    CHECK(prog.size() == 1);
    CHECK(simulate_program(prog, sp).intensity == doctest::Approx(1.0).epsilon(1e-15));
    const Program single{HardPulse{deg(90), deg(90), PulseRole::Rot90Y}};
    CHECK(simulate_program(single, sp).intensity == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("compiled programs reproduce the oracle on resonance") {
    for (double j : {7.0, -7.0, 12.5}) {
        SpinPair sp = on_resonance();
        sp.j_coupling_hz = j;
        for (MatchFunction f : kAllMatchFunctions) {
            for (int r = 0; r <= 8; ++r) {
                const SimulationResult res = simulate_program(compile_counting(f, r, sp), sp);
                CHECK(std::abs(res.intensity - gate_oracle(f, r)) < 1e-6);
                CHECK(res.max_norm_error < 1e-10);
            }
        }
    }
    const SpinPair sp = on_resonance();
    CHECK(simulate_program(compile_counting(MatchFunction::F11, 1, sp), sp).intensity ==
          doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(simulate_program(compile_counting(MatchFunction::F01, 2, sp), sp).intensity ==
          doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("roles are tagged") {
    const Program prog = compile_counting(MatchFunction::F11, 2, on_resonance());
    CHECK(count_role(prog, PulseRole::Rot90Y) == 1 + 2 * 4);
    CHECK(count_role(prog, PulseRole::Rot180X) == 2 * 2);
    SpinPair zero = on_resonance();
    zero.j_coupling_hz = 0.0;
    CHECK_THROWS_AS(compile_counting(MatchFunction::F00, 1, zero), PreconditionError);
}

TEST_CASE("off resonance the pulses leave an artifact") {
    SpinPair sp = scenario(750);
    sp.rf_amplitude_hz = 10000;
    const SimulationResult res = simulate_program(compile_counting(MatchFunction::F11, 4, sp), sp);
    CHECK(std::abs(res.intensity - 1.0) > 1e-3);
    CHECK(res.max_norm_error < 1e-10);
}

TEST_CASE("substitution") {
    const SpinPair sp = on_resonance();
    const Program prog = compile_counting(MatchFunction::F11, 1, sp);
    const Program same = substitute_composite(prog, {});
    CHECK(same.size() == prog.size());

    const SubstitutionMap map = parse_substitution("90y=tycko90");
    const Program sub = substitute_composite(prog, map);
    CHECK(count_role(sub, PulseRole::Rot90Y) == 0);
    CHECK(sub.size() == prog.size() + 2 * count_role(prog, PulseRole::Rot90Y));
    CHECK(std::abs(simulate_program(sub, sp).intensity - gate_oracle(MatchFunction::F11, 1)) < 1e-6);

    const SubstitutionMap both = parse_substitution("tycko90+starcuk180");
    CHECK(both.size() == 2);
    CHECK(both.at(PulseRole::Rot180X).size() == 3);
    for (MatchFunction f : kAllMatchFunctions) {
        const Program p = substitute_composite(compile_counting(f, 3, sp), both);
        CHECK(std::abs(simulate_program(p, sp).intensity - gate_oracle(f, 3)) < 1e-6);
    }
    CHECK(parse_substitution("none").empty());
    CHECK_THROWS_AS(parse_substitution("90z=tycko90"), PreconditionError);
    CHECK_THROWS_AS(parse_substitution("new60"), PreconditionError);
    CHECK_THROWS_AS(substitute_composite(prog, {{PulseRole::Rot90Y, {}}}), PreconditionError);
}

TEST_CASE("traces") {
    SpinPair sp = on_resonance();
    sp.damping = 0.0;
    const CountingTrace flat = counting_trace(MatchFunction::F00, 6, sp, {});
    for (const TracePoint& p : flat.points) CHECK(p.intensity == doctest::Approx(1.0).epsilon(1e-9));

    sp.damping = 0.05;
    const CountingTrace alt = counting_trace(MatchFunction::F11, 10, sp, {});
    REQUIRE(alt.points.size() == 11);
    for (const TracePoint& p : alt.points) {
        CHECK(std::abs(p.intensity - (p.r % 2 == 0 ? 1 : -1) * std::exp(-0.05 * p.r)) < 1e-6);
    }
    CHECK(residual_rms(alt, 0.05) < 1e-6);

    const CountingTrace one = counting_trace(MatchFunction::F01, 0, sp, {});
    REQUIRE(one.points.size() == 1);
    CHECK(one.points[0].intensity == 1.0);

    std::ostringstream os;
    write_trace_csv(alt, os, {{"field_mhz", "750"}});
    const std::string csv = os.str();
    CHECK(csv.find("# field_mhz = 750\n") == 0);
    CHECK(csv.find("r,intensity,f,scenario\n") != std::string::npos);
    CHECK(csv.find("\n1,-0.95122942450071") != std::string::npos);
}

TEST_CASE("scenario defaults") {
    const SpinPair a = scenario(750);
    CHECK(a.delta_nu_hz == doctest::Approx(562.5));
    CHECK(a.rf_amplitude_hz == doctest::Approx(10000));
    CHECK(a.j_coupling_hz == 7.0);
    CHECK(a.id == "750MHz");
    const SpinPair b = scenario(500);
    CHECK(b.delta_nu_hz == doctest::Approx(375));
    CHECK(b.rf_amplitude_hz == doctest::Approx(15000));
    CHECK_THROWS_AS(scenario(-1), PreconditionError);
    SpinPair bad;
    bad.rf_amplitude_hz = 0;
    CHECK_THROWS_AS(validate(bad), PreconditionError);
}

TEST_CASE("the composite 90 cuts the f11 artifact at 750 MHz") {
    const SpinPair sp = scenario(750);
    const double none = residual_rms(counting_trace(MatchFunction::F11, 30, sp, {}), sp.damping);
    const double t90 = residual_rms(counting_trace(MatchFunction::F11, 30, sp, parse_substitution("tycko90")), sp.damping);
    const double both =
        residual_rms(counting_trace(MatchFunction::F11, 30, sp, parse_substitution("tycko90+starcuk180")), sp.damping);
    CHECK(t90 < none);
    CHECK(both <= t90);
}

TEST_CASE("perturbative regime: error grows with field and composites remove it") {
    // Strong RF keeps the pulses in the small-offset regime.
    ScenarioDefaults d;
    d.reference_rf_hz = 60000;
    d.rf_exponent = 2;
    for (MatchFunction f : {MatchFunction::F00, MatchFunction::F11}) {
        double rms[3];
        int k = 0;
        for (double field : {500.0, 600.0, 750.0}) {
            const SpinPair sp = scenario(field, d);
            rms[k++] = residual_rms(counting_trace(f, 30, sp, {}), sp.damping);
        }
        CHECK(rms[0] < rms[1]);
        CHECK(rms[1] < rms[2]);
        const SpinPair sp = scenario(750, d);
        const double t90 = residual_rms(counting_trace(f, 30, sp, parse_substitution("tycko90")), sp.damping);
        const double both = residual_rms(counting_trace(f, 30, sp, parse_substitution("tycko90+starcuk180")), sp.damping);
        CHECK(t90 * 2 < rms[2]);
        CHECK(both <= t90);
    }
}
