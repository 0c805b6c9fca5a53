#pragma once

// Fidelity-grid evaluation kernels.
//
// The scalar kernel is the reference: it runs the library's own pulse_propagator and
// compose for every cell. The AVX2 kernel evaluates four RF-ratio cells per lane group
// with a vectorized sincos and must agree with the scalar kernel to ~1e-13.

#include <span>
#include <string_view>

#include "cpulse/pulse_model.hpp"
#include "cpulse/rotor.hpp"

namespace cpulse::kernels {

enum class KernelKind { Auto, Scalar, Avx2 };

std::string_view kernel_name(KernelKind k);
/// Accepts "auto", "scalar", "avx2"; throws PreconditionError otherwise.
KernelKind parse_kernel(std::string_view name);

/// True when the AVX2 kernel is compiled in and the CPU supports AVX2 and FMA.
bool avx2_available();

/// Auto picks AVX2 when available unless CPULSE_KERNEL=scalar is set in the environment.
/// Requesting Avx2 on a machine without it throws PreconditionError.
KernelKind resolve(KernelKind requested);

struct GridProblem {
    std::span<const Pulse> sequence;
    Rotation target;
    std::span<const double> offsets;  // row axis
    std::span<const double> rfs;      // column axis
};

/// out[i * rfs.size() + j] = fidelity at (offsets[i], rfs[j]).
void grid_scalar(const GridProblem& problem, std::span<double> out);
void grid_avx2(const GridProblem& problem, std::span<double> out);

void evaluate_grid(KernelKind kind, const GridProblem& problem, std::span<double> out);

namespace detail {
/// Vectorized sin/cos used by the AVX2 kernel; exposed for accuracy tests.
void sincos_avx2(std::span<const double> x, std::span<double> s, std::span<double> c);
}  // namespace detail

}  // namespace cpulse::kernels
