#include "cpulse/pulse_model.hpp"

#include <cmath>

#include "cpulse/errors.hpp"

namespace cpulse {

Pulse make_pulse(double flip, double phase) {
    if (!std::isfinite(flip) || !std::isfinite(phase) || flip < 0.0) {
        throw PreconditionError("pulse flip angle must be finite and non-negative");
    }
    return {flip, phase};
}

Rotation pulse_propagator(const Pulse& p, const ErrorPoint& e) {
    const double f1 = e.rf_ratio;
    const double fo = e.offset_ratio;
    const double field = std::hypot(f1, fo);
    if (field == 0.0) return Rotation::identity();
    const double half = 0.5 * p.flip * field;
    const double s = std::sin(half) / field;
    return Rotation::from_components(std::cos(half), s * f1 * std::cos(p.phase), s * f1 * std::sin(p.phase), s * fo);
}

Rotation sequence_propagator(std::span<const Pulse> seq, const ErrorPoint& e) {
    if (seq.empty()) throw PreconditionError("pulse sequence is empty");
    Rotation q = Rotation::identity();
    for (const Pulse& p : seq) q = compose(q, pulse_propagator(p, e));
    return q;
}

Rotation ideal_target(double theta, double phi) { return pulse_propagator({theta, phi}, kNoError); }

double total_flip(std::span<const Pulse> seq) {
    double sum = 0.0;
    for (const Pulse& p : seq) sum += p.flip;
    return sum;
}

PulseSequence rephased(std::span<const Pulse> seq, double dphi) {
    PulseSequence out(seq.begin(), seq.end());
    for (Pulse& p : out) p.phase += dphi;
    return out;
}

Trajectory trajectory(std::span<const Pulse> seq, const ErrorPoint& e, const BlochVector& v0,
                      std::size_t samples_per_pulse) {
    if (samples_per_pulse < 2) throw PreconditionError("trajectory needs at least 2 samples per pulse");
    if (seq.empty()) throw PreconditionError("pulse sequence is empty");

    const double total = total_flip(seq);
    Trajectory out;
    out.samples.reserve(seq.size() * samples_per_pulse);

    // Whole-pulse propagators carry the segment start points so that the endpoint does
    // not accumulate sub-step rounding.
    Rotation start = Rotation::identity();
    double elapsed = 0.0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const Pulse& p = seq[k];
        const BlochVector begin = apply(start, v0);
        const double last = static_cast<double>(samples_per_pulse - 1);
        for (std::size_t j = 0; j < samples_per_pulse; ++j) {
            const double frac = static_cast<double>(j) / last;
            const Rotation partial = pulse_propagator({p.flip * frac, p.phase}, e);
            const double t = total > 0.0 ? (elapsed + p.flip * frac) / total
                                         : (static_cast<double>(k) + frac) / static_cast<double>(seq.size());
            out.samples.push_back({t, k, j == 0 ? begin : apply(partial, begin)});
        }
        start = compose(start, pulse_propagator(p, e));
        elapsed += p.flip;
    }
    out.samples.back().vector = apply(start, v0);
    return out;
}

}  // namespace cpulse
