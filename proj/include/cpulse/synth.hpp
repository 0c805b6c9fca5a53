#pragma once

// Fully-compensating three-pulse sequences theta1(phi) theta2(phi + pi) theta3(phi).
//
// With that phase pattern the sequence performs the target rotation at zero error iff
// theta2 = theta1 + theta3 - theta. Cancelling the first-order offset term additionally
// requires theta3 = +-theta1 + 2 n pi, and then theta1 follows from either of two
// closed forms (an arccos form and an arcsin form) that coincide for 0 < theta < pi.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cpulse/errors.hpp"
#include "cpulse/pulse_model.hpp"

namespace cpulse {

enum class Family {
    ArccosY,  // theta1 from the arccos expression
    ArcsinZ,  // theta1 from the arcsin expression
};

std::string_view family_name(Family f);

/// Thrown when a closed form degenerates (0/0) at the requested target.
class SingularTargetError : public NumericError {
public:
    SingularTargetError(const std::string& what, Family alternative)
        : NumericError(what), alternative_(alternative) {}

    /// Family whose expression is regular at the requested target, when one is.
    Family alternative() const { return alternative_; }

private:
    Family alternative_;
};

struct SynthParams {
    double theta = 0.0;  // target flip, radians, in (0, 2 pi)
    double phi = 0.0;    // target phase, radians
    int n = 1;           // winding: theta1 carries + 2 n pi
    Family family = Family::ArccosY;
    int outer_sign = +1;   // sign in front of arccos/arcsin
    int root_sign = +1;    // sign in front of the square root
    int branch_sign = +1;  // +1: theta3 = theta1 - 2 n pi;  -1: theta3 = -theta1 + 2 n pi
};

/// Signed angles before rendering as pulses.
struct SynthAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;
};

/// theta1 = outer_sign * f(theta) + 2 n pi,  theta3 = branch_sign * (theta1 - 2 n pi),
/// theta2 = theta1 + theta3 - theta, where f is the arccos or arcsin closed form.
SynthAngles synth_angles(const SynthParams& params);

/// Pulses [(theta1, phi), (theta2, phi + pi), (theta3, phi)], negative angles rendered as
/// positive rotations about the opposite phase.
PulseSequence to_sequence(const SynthAngles& angles, double phi);

PulseSequence synthesize(const SynthParams& params);
PulseSequence tycko_family(double theta, double phi = 0.0, int n = 1);
PulseSequence arcsin_family(double theta, double phi = 0.0, int n = 1);

/// Published sequences with integer-degree angles.
struct NamedSequence {
    std::string name;
    double target_flip = 0.0;   // radians
    double target_phase = 0.0;  // radians
    PulseSequence sequence;

    /// The sequence with phases shifted so that the target phase is 0.
    PulseSequence x_referenced() const { return rephased(sequence, -target_phase); }
};

std::span<const NamedSequence> named_sequences();
/// Throws PreconditionError for an unknown name.
const NamedSequence& named_sequence(std::string_view name);

// Refinement ------------------------------------------------------------------------

/// |V0| under OffsetZ.
struct FirstOrderNorm {};

/// 1 - weighted mean fidelity to the target over the listed error points.
struct FidelityAtPoints {
    std::vector<ErrorPoint> points;
    std::vector<double> weights;  // empty means equal weights
};

using Objective = std::variant<FirstOrderNorm, FidelityAtPoints>;

struct RefineOptions {
    int max_iters = 2000;
    double tol = 1e-10;           // simplex size (radians) at which the search stops
    double initial_step = 0.035;  // radians
};

struct RefineResult {
    PulseSequence sequence;
    double theta1 = 0.0;
    double theta3 = 0.0;
    double objective = 0.0;
    double initial_objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

double objective_value(const Objective& objective, std::span<const Pulse> seq, double theta, double phi);

/// Derivative-free search over (theta1, theta3) with the phase pattern (phi, phi + pi, phi)
/// and theta2 = theta1 + theta3 - theta enforced. `init` supplies theta1 and theta3 as
/// signed angles (a pulse at phase phi + pi counts as negative). The returned objective
/// never exceeds the initial one.
RefineResult refine_search(double theta, double phi, const Objective& objective, std::span<const Pulse> init,
                           const RefineOptions& options = {});

}  // namespace cpulse
