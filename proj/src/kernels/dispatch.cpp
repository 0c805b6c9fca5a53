#include <cstdlib>
#include <string>

#include "cpulse/errors.hpp"
#include "cpulse/kernels/grid_kernel.hpp"

namespace cpulse::kernels {

std::string_view kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::Auto: return "auto";
        case KernelKind::Scalar: return "scalar";
        case KernelKind::Avx2: return "avx2";
    }
    return "auto";
}

KernelKind parse_kernel(std::string_view name) {
    if (name == "auto") return KernelKind::Auto;
    if (name == "scalar") return KernelKind::Scalar;
    if (name == "avx2") return KernelKind::Avx2;
    throw PreconditionError("unknown kernel '" + std::string(name) + "' (expected auto, scalar or avx2)");
}

bool avx2_available() {
#if defined(CPULSE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

KernelKind resolve(KernelKind requested) {
    switch (requested) {
        case KernelKind::Scalar: return KernelKind::Scalar;
        case KernelKind::Avx2:
            if (!avx2_available()) throw PreconditionError("AVX2 kernel requested but not available on this CPU");
            return KernelKind::Avx2;
        case KernelKind::Auto: break;
    }
    if (const char* env = std::getenv("CPULSE_KERNEL"); env != nullptr && std::string_view(env) == "scalar") {
        return KernelKind::Scalar;
    }
    return avx2_available() ? KernelKind::Avx2 : KernelKind::Scalar;
}

void evaluate_grid(KernelKind kind, const GridProblem& problem, std::span<double> out) {
    if (resolve(kind) == KernelKind::Avx2) {
        grid_avx2(problem, out);
    } else {
        grid_scalar(problem, out);
    }
}

#if !defined(CPULSE_HAVE_AVX2_TU)
void grid_avx2(const GridProblem&, std::span<double>) {
    throw PreconditionError("AVX2 kernel is not compiled into this build");
}

namespace detail {
void sincos_avx2(std::span<const double>, std::span<double>, std::span<double>) {
    throw PreconditionError("AVX2 kernel is not compiled into this build");
}
}  // namespace detail
#endif

}  // namespace cpulse::kernels
