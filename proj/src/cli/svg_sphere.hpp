#pragma once

#include <string>

#include "cpulse/pulse_model.hpp"

namespace cpulse::cli {

/// Oblique orthographic view of the Bloch sphere with one colour per pulse segment, a
/// filled dot at the final position and a pale ring at the target.
std::string trajectory_svg(const Trajectory& traj, const BlochVector& target, const std::string& title);

}  // namespace cpulse::cli
