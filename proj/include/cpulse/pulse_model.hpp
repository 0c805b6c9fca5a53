#pragma once

// Hard-pulse propagators in the rotating frame, in the dimensionless error plane.
//
// A pulse of nominal flip angle theta and phase phi, played with relative RF amplitude
// f1 = w1/w1_nominal at relative resonance offset fO = Omega/w1_nominal, is the rotation
// by theta*sqrt(f1^2 + fO^2) about (f1 cos phi, f1 sin phi, fO)/sqrt(f1^2 + fO^2).

#include <cstddef>
#include <span>
#include <vector>

#include "cpulse/rotor.hpp"

namespace cpulse {

struct Pulse {
    double flip = 0.0;   // nominal rotation angle, radians, >= 0 (may exceed 2 pi)
    double phase = 0.0;  // radians
};

using PulseSequence = std::vector<Pulse>;

/// Throws PreconditionError unless flip >= 0 and both fields are finite.
Pulse make_pulse(double flip, double phase);

struct ErrorPoint {
    double offset_ratio = 0.0;  // Omega / w1_nominal, signed
    double rf_ratio = 1.0;      // w1 / w1_nominal, >= 0
};

inline constexpr ErrorPoint kNoError{0.0, 1.0};

Rotation pulse_propagator(const Pulse& p, const ErrorPoint& e);

/// Time-ordered product of the pulse propagators; throws on an empty sequence.
Rotation sequence_propagator(std::span<const Pulse> seq, const ErrorPoint& e);

/// Rotation by theta about (cos phi, sin phi, 0).
Rotation ideal_target(double theta, double phi);

double total_flip(std::span<const Pulse> seq);

/// Adds `dphi` to every phase.
PulseSequence rephased(std::span<const Pulse> seq, double dphi);

struct TrajectorySample {
    double time_fraction = 0.0;  // elapsed nominal flip / total nominal flip
    std::size_t segment = 0;     // index of the pulse being played
    BlochVector vector;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;

    const BlochVector& final_vector() const { return samples.back().vector; }
};

/// Samples the Bloch vector at `samples_per_pulse` evenly spaced points (both ends
/// included) inside every pulse. Consecutive segments share their boundary point.
Trajectory trajectory(std::span<const Pulse> seq, const ErrorPoint& e, const BlochVector& v0,
                      std::size_t samples_per_pulse);

}  // namespace cpulse
