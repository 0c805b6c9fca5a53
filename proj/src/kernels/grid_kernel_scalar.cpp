#include "cpulse/kernels/grid_kernel.hpp"

#include "cpulse/errors.hpp"

namespace cpulse::kernels {

void grid_scalar(const GridProblem& problem, std::span<double> out) {
    const std::size_t nr = problem.rfs.size();
    if (out.size() != problem.offsets.size() * nr) throw PreconditionError("grid output has the wrong size");
    for (std::size_t i = 0; i < problem.offsets.size(); ++i) {
        for (std::size_t j = 0; j < nr; ++j) {
            const Rotation q = sequence_propagator(problem.sequence, {problem.offsets[i], problem.rfs[j]});
            out[i * nr + j] = quaternion_overlap(q, problem.target);
        }
    }
}

}  // namespace cpulse::kernels
