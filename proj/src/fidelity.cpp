#include "cpulse/fidelity.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "cpulse/csv.hpp"
#include "cpulse/errors.hpp"

namespace cpulse {

double fidelity(const Rotation& actual, const Rotation& target) { return quaternion_overlap(actual, target); }

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count < 2) throw PreconditionError("linspace needs at least two points");
    std::vector<double> out(count);
    const double span = hi - lo;
    const double last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + span * (static_cast<double>(i) / last);
    out.back() = hi;
    return out;
}

FidelityGrid fidelity_grid(std::span<const Pulse> seq, const Rotation& target, const GridWindow& window,
                           kernels::KernelKind kernel) {
    if (seq.empty()) throw PreconditionError("pulse sequence is empty");
    const bool finite = std::isfinite(window.offset_min) && std::isfinite(window.offset_max) &&
                        std::isfinite(window.rf_min) && std::isfinite(window.rf_max);
    if (!finite || !(window.offset_min < window.offset_max) || !(window.rf_min < window.rf_max)) {
        throw PreconditionError("grid window must be finite with min < max on both axes");
    }
    if (window.rf_min < 0.0) throw PreconditionError("rf ratio must be non-negative");
    if (window.offset_points < 2 || window.rf_points < 2) {
        throw PreconditionError("grid resolution must be at least 2 on each axis");
    }

    FidelityGrid grid;
    grid.offset_axis = linspace(window.offset_min, window.offset_max, window.offset_points);
    grid.rf_axis = linspace(window.rf_min, window.rf_max, window.rf_points);
    grid.values.assign(grid.offset_axis.size() * grid.rf_axis.size(), 0.0);
    kernels::evaluate_grid(kernel, {seq, target, grid.offset_axis, grid.rf_axis}, grid.values);
    return grid;
}

namespace {

std::size_t nearest_index(const std::vector<double>& axis, double value) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (std::abs(axis[i] - value) < std::abs(axis[best] - value)) best = i;
    }
    return best;
}

double crossing(double x0, double v0, double x1, double v1, double level) {
    if (v0 == v1) return 0.5 * (x0 + x1);
    return x0 + (level - v0) / (v1 - v0) * (x1 - x0);
}

}  // namespace

double level_halfwidth(const FidelityGrid& grid, double rf_value, double level) {
    if (grid.offset_axis.empty() || grid.rf_axis.empty()) throw PreconditionError("empty grid");
    const std::size_t j = nearest_index(grid.rf_axis, rf_value);
    const std::size_t i0 = nearest_index(grid.offset_axis, 0.0);
    const auto& x = grid.offset_axis;
    if (grid.at(i0, j) < level) return 0.0;

    double right = x.back();
    for (std::size_t i = i0 + 1; i < x.size(); ++i) {
        if (grid.at(i, j) < level) {
            right = crossing(x[i - 1], grid.at(i - 1, j), x[i], grid.at(i, j), level);
            break;
        }
    }
    double left = x.front();
    for (std::size_t i = i0; i-- > 0;) {
        if (grid.at(i, j) < level) {
            left = crossing(x[i + 1], grid.at(i + 1, j), x[i], grid.at(i, j), level);
            break;
        }
    }
    return 0.5 * (right - left);
}

void write_metadata(std::ostream& os, const Metadata& meta) {
    for (const auto& [key, value] : meta) {
        std::string clean = value;
        for (char& ch : clean) {
            if (ch == '\n' || ch == '\r') ch = ' ';
        }
        os << "# " << key << " = " << clean << '\n';
    }
}

void write_grid_csv(const FidelityGrid& grid, std::ostream& os, const Metadata& meta) {
    write_metadata(os, meta);
    os << csv::escape("offset\\rf");
    for (double rf : grid.rf_axis) os << ',' << csv::number(rf);
    os << '\n';
    for (std::size_t i = 0; i < grid.offset_axis.size(); ++i) {
        os << csv::number(grid.offset_axis[i]);
        for (std::size_t j = 0; j < grid.rf_axis.size(); ++j) os << ',' << csv::number(grid.at(i, j));
        os << '\n';
    }
}

FidelityGrid read_grid_csv(std::istream& is) {
    FidelityGrid grid;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = csv::split(line);
        if (!header) {
            for (std::size_t k = 1; k < fields.size(); ++k) grid.rf_axis.push_back(csv::parse_number(fields[k]));
            header = true;
            continue;
        }
        if (fields.size() != grid.rf_axis.size() + 1) throw IoError("grid CSV row has the wrong number of fields");
        grid.offset_axis.push_back(csv::parse_number(fields[0]));
        for (std::size_t k = 1; k < fields.size(); ++k) grid.values.push_back(csv::parse_number(fields[k]));
    }
    if (!header || grid.offset_axis.empty()) throw IoError("grid CSV has no data");
    return grid;
}

}  // namespace cpulse
