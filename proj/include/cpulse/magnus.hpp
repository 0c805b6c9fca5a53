#pragma once

// Leading Magnus terms of the error propagator in the toggling frame.
//
// All integrals run over the dimensionless nominal angle s = w1_nominal * t, so a
// sequence of total nominal flip S lasts S. The toggled error is
//     Vt(s) = U0(s)^-1 V U0(s)
// with U0 the error-free propagator up to s. On the (Ix, Iy, Iz) basis this is the
// vector R0(s)^T v(s). The error propagator is then
//     U_V = exp(-i S (eps V0 + eps^2 V1 + ...) . I),   U = U0 U_V,
// where eps is the error strength in units of w1_nominal: eps = dw/w1 for OffsetZ,
// eps = dw1/w1 for RfScale.

#include <span>

#include "cpulse/pulse_model.hpp"
#include "cpulse/rotor.hpp"

namespace cpulse {

enum class ErrorGenerator {
    OffsetZ,  // V = dw Iz
    RfScale,  // V = dw1 (Ix cos phi(t) + Iy sin phi(t))
};

struct ErrorVector {
    double cx = 0.0;
    double cy = 0.0;
    double cz = 0.0;

    constexpr Vec3 vec() const { return {cx, cy, cz}; }
    static constexpr ErrorVector from(const Vec3& v) { return {v.x, v.y, v.z}; }
    double norm() const { return vec().norm(); }
};

/// V0 = (1/S) int_0^S Vt(s) ds per unit eps. Closed form per pulse. Zero when S = 0.
ErrorVector first_order_error(std::span<const Pulse> seq, ErrorGenerator g);

/// V1 = (1/2S) int_0^S ds1 int_0^s1 ds2 Vt(s1) x Vt(s2) per unit eps^2
/// (the commutator term of the expansion; [a.I, b.I] = i (a x b).I).
ErrorVector second_order_error(std::span<const Pulse> seq, ErrorGenerator g);

/// Rescales a term from the sequence duration S to the target rotation's nominal
/// duration `target_flip`, i.e. multiplies by S / target_flip. For the compensated
/// three-pulse family under RfScale this yields the plain pulse's own error, +1 along
/// the pulse axis.
ErrorVector per_target_duration(const ErrorVector& v, std::span<const Pulse> seq, double target_flip);

/// exp(-i S (eps V0 + eps^2 V1) . I) as a rotation.
Rotation magnus_error_propagator(std::span<const Pulse> seq, ErrorGenerator g, double eps);

/// The error point that realises strength `eps` of generator `g`.
ErrorPoint error_point_for(ErrorGenerator g, double eps);

}  // namespace cpulse
