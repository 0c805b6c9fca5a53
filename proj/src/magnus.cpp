#include "cpulse/magnus.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "cpulse/errors.hpp"

namespace cpulse {

namespace {

constexpr std::size_t kGaussOrder = 24;
constexpr double kMaxPanel = std::numbers::pi / 4.0;

struct GlTableDeleter {
    void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};

const gsl_integration_glfixed_table& gauss_table() {
    static const std::unique_ptr<gsl_integration_glfixed_table, GlTableDeleter> table(
        gsl_integration_glfixed_table_alloc(kGaussOrder));
    return *table;
}

Vec3 pulse_axis(const Pulse& p) { return {std::cos(p.phase), std::sin(p.phase), 0.0}; }

Vec3 generator_vector(const Pulse& p, ErrorGenerator g) {
    return g == ErrorGenerator::OffsetZ ? Vec3{0.0, 0.0, 1.0} : pulse_axis(p);
}

// R_n(-u) v: the pulse-local toggled error after angle u.
Vec3 toggled_local(const Vec3& n, const Vec3& v, double u) {
    const Vec3 along = n * dot(n, v);
    const Vec3 perp = v - along;
    return along + perp * std::cos(u) - cross(n, perp) * std::sin(u);
}

// int_0^u R_n(-x) v dx.
Vec3 toggled_local_integral(const Vec3& n, const Vec3& v, double u) {
    const Vec3 along = n * dot(n, v);
    const Vec3 perp = v - along;
    return along * u + perp * std::sin(u) - cross(n, perp) * (1.0 - std::cos(u));
}

void require_nonempty(std::span<const Pulse> seq) {
    if (seq.empty()) throw PreconditionError("pulse sequence is empty");
}

}  // namespace

ErrorVector first_order_error(std::span<const Pulse> seq, ErrorGenerator g) {
    require_nonempty(seq);
    const double total = total_flip(seq);
    if (total == 0.0) return {};

    Vec3 sum;
    Rotation before = Rotation::identity();
    for (const Pulse& p : seq) {
        const Vec3 local = toggled_local_integral(pulse_axis(p), generator_vector(p, g), p.flip);
        sum += apply(before.inverse(), local);
        before = compose(before, pulse_propagator(p, kNoError));
    }
    return ErrorVector::from(sum * (1.0 / total));
}

ErrorVector second_order_error(std::span<const Pulse> seq, ErrorGenerator g) {
    require_nonempty(seq);
    const double total = total_flip(seq);
    if (total == 0.0) return {};

    const gsl_integration_glfixed_table& table = gauss_table();

    // int Vt(s1) x C(s1) ds1 with C(s1) = int_0^s1 Vt. Inside pulse k, C = C_k + P_k^T I_k(u),
    // so the integrand splits into a closed-form part (int Vt) x C_k and the rotated
    // pulse-local term P_k^T [ R_n(-u) v x I_k(u) ], integrated by Gauss-Legendre panels.
    Vec3 sum;
    Vec3 cumulative;
    Rotation before = Rotation::identity();
    for (const Pulse& p : seq) {
        const Vec3 n = pulse_axis(p);
        const Vec3 v = generator_vector(p, g);
        const Rotation back = before.inverse();
        const Vec3 pulse_integral = apply(back, toggled_local_integral(n, v, p.flip));

        Vec3 local;
        if (p.flip > 0.0) {
            const auto panels = static_cast<std::size_t>(std::ceil(p.flip / kMaxPanel));
            const double width = p.flip / static_cast<double>(panels);
            for (std::size_t k = 0; k < panels; ++k) {
                const double a = width * static_cast<double>(k);
                for (std::size_t i = 0; i < kGaussOrder; ++i) {
                    double node = 0.0;
                    double weight = 0.0;
                    gsl_integration_glfixed_point(a, a + width, i, &node, &weight, &table);
                    local += cross(toggled_local(n, v, node), toggled_local_integral(n, v, node)) * weight;
                }
            }
        }

        sum += cross(pulse_integral, cumulative) + apply(back, local);
        cumulative += pulse_integral;
        before = compose(before, pulse_propagator(p, kNoError));
    }
    return ErrorVector::from(sum * (0.5 / total));
}

ErrorVector per_target_duration(const ErrorVector& v, std::span<const Pulse> seq, double target_flip) {
    if (!(target_flip > 0.0)) throw PreconditionError("target flip must be positive");
    return ErrorVector::from(v.vec() * (total_flip(seq) / target_flip));
}

Rotation magnus_error_propagator(std::span<const Pulse> seq, ErrorGenerator g, double eps) {
    const Vec3 v0 = first_order_error(seq, g).vec();
    const Vec3 v1 = second_order_error(seq, g).vec();
    return rot_from_vector((v0 * eps + v1 * (eps * eps)) * total_flip(seq));
}

ErrorPoint error_point_for(ErrorGenerator g, double eps) {
    return g == ErrorGenerator::OffsetZ ? ErrorPoint{eps, 1.0} : ErrorPoint{0.0, 1.0 + eps};
}

}  // namespace cpulse
