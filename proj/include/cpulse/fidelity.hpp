#pragma once

// Quaternion fidelity and fidelity maps over the (offset, RF-scale) plane.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpulse/kernels/grid_kernel.hpp"
#include "cpulse/pulse_model.hpp"
#include "cpulse/rotor.hpp"

namespace cpulse {

/// |<actual, target>| = |cos(residual angle / 2)|.
double fidelity(const Rotation& actual, const Rotation& target);

struct GridWindow {
    double offset_min = -1.0;
    double offset_max = 1.0;
    double rf_min = 0.5;
    double rf_max = 1.5;
    std::size_t offset_points = 101;
    std::size_t rf_points = 101;
};

struct FidelityGrid {
    std::vector<double> offset_axis;
    std::vector<double> rf_axis;
    std::vector<double> values;  // row-major, values[i * rf_axis.size() + j]

    double at(std::size_t offset_index, std::size_t rf_index) const {
        return values[offset_index * rf_axis.size() + rf_index];
    }
};

/// Evenly spaced samples, endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t count);

FidelityGrid fidelity_grid(std::span<const Pulse> seq, const Rotation& target, const GridWindow& window,
                           kernels::KernelKind kernel = kernels::KernelKind::Auto);

/// Half-width in offset of the region with fidelity >= level that contains offset 0,
/// along the RF column closest to `rf_value`. Edges are linearly interpolated; a region
/// that reaches the window edge is clipped there. Returns 0 when the cell at offset 0 is
/// already below `level`.
double level_halfwidth(const FidelityGrid& grid, double rf_value, double level);

// Export ----------------------------------------------------------------------------

using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& os, const Metadata& meta);

/// Header row = RF axis, header column = offset axis, '#' metadata lines first.
void write_grid_csv(const FidelityGrid& grid, std::ostream& os, const Metadata& meta = {});
FidelityGrid read_grid_csv(std::istream& is);

struct ContourLevels {
    std::vector<double> solid{0.10, 0.25, 0.40, 0.55, 0.70, 0.85};
    std::vector<double> dashed{0.95, 0.96, 0.97, 0.98, 0.99};
};

struct Segment {
    double x0, y0, x1, y1;  // x = offset, y = rf
};

/// Marching squares with linear interpolation on each cell edge.
std::vector<Segment> contour_segments(const FidelityGrid& grid, double level);

std::string contour_svg(const FidelityGrid& grid, const ContourLevels& levels = {}, const std::string& title = {});

/// Writes `<prefix>.csv` and `<prefix>.svg`; throws IoError when either cannot be written.
void contour_export(const FidelityGrid& grid, const std::filesystem::path& prefix, const Metadata& meta = {},
                    const ContourLevels& levels = {});

}  // namespace cpulse
