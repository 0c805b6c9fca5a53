#pragma once

// Two-spin quantum counting over a one-qubit search space.
//
// Spin 0 is the control (readout) qubit and spin 1 the target. Both start in |0> and are
// put into (|0> + |1>)/sqrt(2) by a 90_y pulse. Controlled-G is applied r times with
//     G = H U0 H^-1 Uf,   U0 = diag(-1, 1),   Uf |x> = (-1)^(f(x)+1) |x>,
// and the signal is <sigma_x> on the control, which equals cos(r * 2 asin(sqrt(k/2))).
//
// The pulse-level model uses one transmitter halfway between the spins, so spin 0 sits
// at +delta_nu and spin 1 at -delta_nu. Hard pulses ignore J; delays evolve offsets and
// the weak-coupling term 2 pi J Iz1 Iz2; FrameZ is an exact software z-rotation.

#include <complex>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cpulse/fidelity.hpp"
#include "cpulse/pulse_model.hpp"

namespace cpulse::counting {

/// Truth tables f(0) f(1). f01 marks the first input (x = 0), f10 the second.
enum class MatchFunction { F00, F01, F10, F11 };

std::string_view match_name(MatchFunction f);
MatchFunction parse_match(std::string_view name);
int match_value(MatchFunction f, int x);
int match_count(MatchFunction f);
inline constexpr MatchFunction kAllMatchFunctions[] = {MatchFunction::F00, MatchFunction::F01, MatchFunction::F10,
                                                       MatchFunction::F11};

struct SpinPair {
    double base_frequency_mhz = 750.0;
    double delta_nu_hz = 0.0;  // each spin sits delta_nu away from the transmitter
    double j_coupling_hz = 7.0;
    double rf_amplitude_hz = 10000.0;  // nominal w1 / 2 pi
    double damping = 0.0;              // exponential decay per controlled-G application
    std::string id = "custom";
};

/// Throws PreconditionError unless rf_amplitude > 0, damping >= 0 and all fields are finite.
void validate(const SpinPair& sp);

/// Default-scenario recipe. rf amplitude = reference_rf * (reference_field / field)^rf_exponent;
/// delta_nu = half the ppm separation times the field.
struct ScenarioDefaults {
    double ppm_separation = 1.5;
    double j_coupling_hz = 7.0;
    double reference_field_mhz = 750.0;
    double reference_rf_hz = 10000.0;
    double rf_exponent = 1.0;
    double damping = 0.02;
};

SpinPair scenario(double base_frequency_mhz, const ScenarioDefaults& defaults = {});

// Pulse programs ----------------------------------------------------------------------

enum class PulseRole { None, Rot90Y, Rot180X };

std::string_view role_name(PulseRole r);
/// "90y" or "180x"; throws PreconditionError for anything else.
PulseRole parse_role(std::string_view name);

struct HardPulse {
    double flip = 0.0;
    double phase = 0.0;
    PulseRole role = PulseRole::None;
};

struct Delay {
    double seconds = 0.0;
};

struct FrameZ {
    int spin = 0;
    double angle = 0.0;
};

using Instruction = std::variant<HardPulse, Delay, FrameZ>;
using Program = std::vector<Instruction>;

using State = Eigen::Vector4cd;  // basis |control target>: |00>, |01>, |10>, |11>

/// Exact 4x4 evaluation: <sigma_x control> after r controlled-G applications.
double gate_oracle(MatchFunction f, int r);
/// cos(r * 2 asin(sqrt(k / 2))).
double gate_closed_form(MatchFunction f, int r);

/// Preparation, r controlled-G blocks, nothing else. Throws PreconditionError if J = 0.
Program compile_counting(MatchFunction f, int r, const SpinPair& sp);

struct SimulationResult {
    State state;
    double intensity = 0.0;
    double max_norm_error = 0.0;  // largest |1 - |psi|| seen after any instruction
};

SimulationResult simulate_program(const Program& prog, const SpinPair& sp);

/// Role -> composite replacement, written relative to phase 0; each tagged pulse is
/// replaced by the composite shifted by the pulse's own phase.
using SubstitutionMap = std::map<PulseRole, PulseSequence>;

Program substitute_composite(const Program& prog, const SubstitutionMap& map);

/// Parses "90y=tycko90,180x=starcuk180" (names from the sequence catalog); "none" or ""
/// gives an empty map.
SubstitutionMap parse_substitution(std::string_view spec);

struct TracePoint {
    int r = 0;
    double intensity = 0.0;
};

struct CountingTrace {
    MatchFunction f = MatchFunction::F00;
    std::string scenario_id;
    std::string substitution;
    std::vector<TracePoint> points;
    std::string normalization = "intensity(r) / intensity(0), damped by exp(-damping * r)";
};

CountingTrace counting_trace(MatchFunction f, int r_max, const SpinPair& sp, const SubstitutionMap& map,
                             std::string_view substitution_label = "none");

/// RMS over the trace of intensity - cos(r beta_k) exp(-damping r).
double residual_rms(const CountingTrace& trace, double damping);

/// Columns r, intensity, f, scenario.
void write_trace_csv(const CountingTrace& trace, std::ostream& os, const Metadata& meta = {});

}  // namespace cpulse::counting
