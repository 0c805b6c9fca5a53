#include "cpulse/synth.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>

#include "cpulse/fidelity.hpp"
#include "cpulse/magnus.hpp"

namespace cpulse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularGuard = 1e-9;

double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

Pulse signed_pulse(double angle, double phase) {
    if (angle < 0.0) return {-angle, wrap_phase(phase + kPi)};
    return {angle, wrap_phase(phase)};
}

// Tolerates rounding just outside [-1, 1].
double clamp_unit(double x, const char* what) {
    if (!std::isfinite(x) || std::abs(x) > 1.0 + 1e-12) {
        throw NumericError(std::string(what) + " argument outside [-1, 1] for this target and sign choice");
    }
    return std::clamp(x, -1.0, 1.0);
}

double arccos_base(double theta, int root_sign) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double d = 1.0 - c;
    if (d <= kSingularGuard) {
        throw SingularTargetError("arccos family is singular at this target (1 - cos theta -> 0); use the arcsin family",
                                  Family::ArcsinZ);
    }
    const double arg = (d * d + root_sign * std::sqrt(d * (7.0 + c)) * s) / (4.0 * d);
    return std::acos(clamp_unit(arg, "arccos"));
}

double arcsin_base(double theta, int root_sign) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double e = 1.0 + c;
    if (e <= kSingularGuard) {
        throw SingularTargetError("arcsin family is singular at this target (1 + cos theta -> 0); use the arccos family",
                                  Family::ArccosY);
    }
    const double arg = -s * (e - root_sign * std::sqrt(e * (7.0 + c))) / (4.0 * e);
    return std::asin(clamp_unit(arg, "arcsin"));
}

void require_sign(int s, const char* name) {
    if (s != 1 && s != -1) throw PreconditionError(std::string(name) + " must be +1 or -1");
}

}  // namespace

std::string_view family_name(Family f) { return f == Family::ArccosY ? "arccos" : "arcsin"; }

SynthAngles synth_angles(const SynthParams& params) {
    require_sign(params.outer_sign, "outer_sign");
    require_sign(params.root_sign, "root_sign");
    require_sign(params.branch_sign, "branch_sign");
    if (!std::isfinite(params.theta) || !std::isfinite(params.phi)) {
        throw PreconditionError("target angle and phase must be finite");
    }

    // The singular guard runs before the range check so that theta = 2 pi reports the
    // degenerate formula rather than a range error.
    const double base = params.family == Family::ArccosY ? arccos_base(params.theta, params.root_sign)
                                                          : arcsin_base(params.theta, params.root_sign);
    if (!(params.theta > 0.0 && params.theta < kTwoPi)) {
        throw PreconditionError("target flip angle must lie in (0, 2 pi)");
    }

    const double winding = kTwoPi * params.n;
    SynthAngles a;
    a.theta1 = params.outer_sign * base + winding;
    a.theta3 = params.branch_sign * (a.theta1 - winding);
    a.theta2 = a.theta1 + a.theta3 - params.theta;
    return a;
}

PulseSequence to_sequence(const SynthAngles& angles, double phi) {
    return {signed_pulse(angles.theta1, phi), signed_pulse(angles.theta2, phi + kPi), signed_pulse(angles.theta3, phi)};
}

PulseSequence synthesize(const SynthParams& params) { return to_sequence(synth_angles(params), params.phi); }

PulseSequence tycko_family(double theta, double phi, int n) {
    return synthesize({.theta = theta, .phi = phi, .n = n, .family = Family::ArccosY});
}

PulseSequence arcsin_family(double theta, double phi, int n) {
    return synthesize({.theta = theta, .phi = phi, .n = n, .family = Family::ArcsinZ});
}

std::span<const NamedSequence> named_sequences() {
    static const std::array<NamedSequence, 3> catalog{{
        {"tycko90", deg(90), deg(90), {{deg(385), deg(90)}, {deg(320), deg(270)}, {deg(25), deg(90)}}},
        {"starcuk180", deg(180), 0.0, {{deg(90), 0.0}, {deg(225), deg(180)}, {deg(315), 0.0}}},
        {"new60", deg(60), 0.0, {{deg(375), 0.0}, {deg(331), deg(180)}, {deg(15), 0.0}}},
    }};
    return catalog;
}

const NamedSequence& named_sequence(std::string_view name) {
    for (const NamedSequence& s : named_sequences()) {
        if (s.name == name) return s;
    }
    throw PreconditionError("unknown named sequence '" + std::string(name) + "'");
}

// Refinement ------------------------------------------------------------------------

double objective_value(const Objective& objective, std::span<const Pulse> seq, double theta, double phi) {
    if (std::holds_alternative<FirstOrderNorm>(objective)) {
        return first_order_error(seq, ErrorGenerator::OffsetZ).norm();
    }
    const auto& at = std::get<FidelityAtPoints>(objective);
    if (at.points.empty()) throw PreconditionError("fidelity objective needs at least one error point");
    if (!at.weights.empty() && at.weights.size() != at.points.size()) {
        throw PreconditionError("fidelity objective weights must match points");
    }
    const Rotation target = ideal_target(theta, phi);
    double sum = 0.0;
    double wsum = 0.0;
    for (std::size_t i = 0; i < at.points.size(); ++i) {
        const double w = at.weights.empty() ? 1.0 : at.weights[i];
        if (!(w >= 0.0)) throw PreconditionError("fidelity objective weights must be non-negative");
        sum += w * fidelity(sequence_propagator(seq, at.points[i]), target);
        wsum += w;
    }
    if (!(wsum > 0.0)) throw PreconditionError("fidelity objective weights sum to zero");
    return 1.0 - sum / wsum;
}

namespace {

struct SearchContext {
    const Objective* objective;
    double theta;
    double phi;
};

PulseSequence constrained_sequence(double theta1, double theta3, double theta, double phi) {
    return to_sequence({theta1, theta1 + theta3 - theta, theta3}, phi);
}

double search_function(const gsl_vector* x, void* params) {
    const auto* ctx = static_cast<const SearchContext*>(params);
    const PulseSequence seq = constrained_sequence(gsl_vector_get(x, 0), gsl_vector_get(x, 1), ctx->theta, ctx->phi);
    return objective_value(*ctx->objective, seq, ctx->theta, ctx->phi);
}

double signed_flip(const Pulse& p, double phi) { return std::cos(p.phase - phi) >= 0.0 ? p.flip : -p.flip; }

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

}  // namespace

RefineResult refine_search(double theta, double phi, const Objective& objective, std::span<const Pulse> init,
                           const RefineOptions& options) {
    if (init.size() != 3) throw PreconditionError("refine_search expects a three-pulse initial sequence");
    if (options.max_iters < 1 || !(options.tol > 0.0) || !(options.initial_step > 0.0)) {
        throw PreconditionError("refine_search options must be positive");
    }

    SearchContext ctx{&objective, theta, phi};
    RefineResult result;
    result.theta1 = signed_flip(init[0], phi);
    result.theta3 = signed_flip(init[2], phi);
    result.sequence = constrained_sequence(result.theta1, result.theta3, theta, phi);
    result.initial_objective = objective_value(objective, result.sequence, theta, phi);
    result.objective = result.initial_objective;

    gsl_set_error_handler_off();
    std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(2));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(2));
    gsl_vector_set(x.get(), 0, result.theta1);
    gsl_vector_set(x.get(), 1, result.theta3);
    gsl_vector_set_all(step.get(), options.initial_step);

    gsl_multimin_function fn{&search_function, 2, &ctx};
    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
    if (gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) {
        throw NumericError("simplex initialisation failed");
    }

    int iter = 0;
    bool converged = false;
    while (iter < options.max_iters) {
        ++iter;
        if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
        const double size = gsl_multimin_fminimizer_size(minimizer.get());
        if (gsl_multimin_test_size(size, options.tol) == GSL_SUCCESS) {
            converged = true;
            break;
        }
    }

    result.iterations = iter;
    result.converged = converged;
    const double best = gsl_multimin_fminimizer_minimum(minimizer.get());
    if (best < result.initial_objective) {
        const gsl_vector* bx = gsl_multimin_fminimizer_x(minimizer.get());
        result.theta1 = gsl_vector_get(bx, 0);
        result.theta3 = gsl_vector_get(bx, 1);
        result.sequence = constrained_sequence(result.theta1, result.theta3, theta, phi);
        result.objective = best;
    }
    return result;
}

}  // namespace cpulse
