#include "cli/svg_sphere.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace cpulse::cli {

namespace {

constexpr double kRadius = 200.0;
constexpr double kCx = 260.0;
constexpr double kCy = 250.0;
constexpr double kAzimuth = 0.6;    // rotation about z before tilting
constexpr double kElevation = 0.35; // tilt of the view toward +z

constexpr std::array<const char*, 6> kPalette{"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

struct Screen {
    double x, y;
};

Screen project(const Vec3& v) {
    const double ca = std::cos(kAzimuth), sa = std::sin(kAzimuth);
    const double ce = std::cos(kElevation), se = std::sin(kElevation);
    // Screen right is the rotated x-axis, screen up mixes the rotated y-axis and z.
    const double right = ca * v.x + sa * v.y;
    const double depth = -sa * v.x + ca * v.y;
    const double up = ce * v.z - se * depth;
    return {kCx + kRadius * right, kCy - kRadius * up};
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void polyline(std::ostringstream& os, const std::vector<Vec3>& pts, const char* stroke, double width,
              const char* extra = "") {
    os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fixed(width) << "\"" << extra
       << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Screen s = project(pts[i]);
        os << (i ? " " : "") << fixed(s.x) << ',' << fixed(s.y);
    }
    os << "\"/>\n";
}

}  // namespace

std::string trajectory_svg(const Trajectory& traj, const BlochVector& target, const std::string& title) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"520\" height=\"520\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<circle cx=\"" << fixed(kCx) << "\" cy=\"" << fixed(kCy) << "\" r=\"" << fixed(kRadius)
       << "\" fill=\"none\" stroke=\"#999999\"/>\n";
    if (!title.empty()) os << "<text x=\"260\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";

    std::vector<Vec3> ring;
    for (int k = 0; k <= 72; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 72.0;
        ring.push_back({std::cos(a), std::sin(a), 0.0});
    }
    polyline(os, ring, "#bbbbbb", 0.8, " stroke-dasharray=\"3 3\"");
    const std::array<std::pair<Vec3, const char*>, 3> axes{{{{1, 0, 0}, "x"}, {{0, 1, 0}, "y"}, {{0, 0, 1}, "z"}}};
    for (const auto& [axis, name] : axes) {
        polyline(os, {{0, 0, 0}, axis * 1.1}, "#777777", 0.8);
        const Screen s = project(axis * 1.18);
        os << "<text x=\"" << fixed(s.x) << "\" y=\"" << fixed(s.y) << "\" font-size=\"13\" fill=\"#555555\">" << name
           << "</text>\n";
    }

    std::vector<Vec3> seg;
    std::size_t current = traj.samples.empty() ? 0 : traj.samples.front().segment;
    auto flush = [&](std::size_t index) {
        if (seg.size() >= 2) polyline(os, seg, kPalette[index % kPalette.size()], 2.0);
        seg.clear();
    };
    for (const TrajectorySample& s : traj.samples) {
        if (s.segment != current) {
            flush(current);
            current = s.segment;
        }
        seg.push_back(s.vector.vec());
    }
    flush(current);

    const Screen t = project(target.vec());
    os << "<circle class=\"target\" cx=\"" << fixed(t.x) << "\" cy=\"" << fixed(t.y)
       << "\" r=\"9\" fill=\"none\" stroke=\"#f4b6b6\" stroke-width=\"4\"/>\n";
    if (!traj.samples.empty()) {
        const Screen f = project(traj.final_vector().vec());
        os << "<circle class=\"final\" cx=\"" << fixed(f.x) << "\" cy=\"" << fixed(f.y) << "\" r=\"5\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace cpulse::cli
