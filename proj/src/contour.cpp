#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cpulse/csv.hpp"
#include "cpulse/errors.hpp"
#include "cpulse/fidelity.hpp"

namespace cpulse {

namespace {

struct Point {
    double x, y;
};

Point edge_point(Point p0, double v0, Point p1, double v1, double level) {
    const double t = (v0 == v1) ? 0.5 : (level - v0) / (v1 - v0);
    return {p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::vector<Segment> contour_segments(const FidelityGrid& grid, double level) {
    std::vector<Segment> out;
    const auto& xs = grid.offset_axis;
    const auto& ys = grid.rf_axis;
    if (xs.size() < 2 || ys.size() < 2) return out;

    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            // Corners counter-clockwise: a (i, j), b (i+1, j), c (i+1, j+1), d (i, j+1).
            const std::array<Point, 4> p{{{xs[i], ys[j]}, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]}, {xs[i], ys[j + 1]}}};
            const std::array<double, 4> v{grid.at(i, j), grid.at(i + 1, j), grid.at(i + 1, j + 1), grid.at(i, j + 1)};
            std::array<bool, 4> in{};
            int inside = 0;
            for (int k = 0; k < 4; ++k) {
                in[k] = v[k] >= level;
                inside += in[k] ? 1 : 0;
            }
            if (inside == 0 || inside == 4) continue;

            // Edge e joins corner e and corner e+1: bottom, right, top, left.
            std::array<Point, 4> cut{};
            std::array<bool, 4> crossed{};
            for (int e = 0; e < 4; ++e) {
                const int f = (e + 1) % 4;
                crossed[e] = in[e] != in[f];
                if (crossed[e]) cut[e] = edge_point(p[e], v[e], p[f], v[f], level);
            }

            auto emit = [&](int e0, int e1) { out.push_back({cut[e0].x, cut[e0].y, cut[e1].x, cut[e1].y}); };

            if (inside == 2 && in[0] == in[2]) {
                // Saddle: decide which diagonal pair is joined through the cell centre.
                const bool centre = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                if (in[0] != centre) {
                    emit(3, 0);  // isolate a
                    emit(1, 2);  // isolate c
                } else {
                    emit(0, 1);  // isolate b
                    emit(2, 3);  // isolate d
                }
                continue;
            }
            int first = -1;
            for (int e = 0; e < 4; ++e) {
                if (!crossed[e]) continue;
                if (first < 0) {
                    first = e;
                } else {
                    emit(first, e);
                    break;
                }
            }
        }
    }
    return out;
}

std::string contour_svg(const FidelityGrid& grid, const ContourLevels& levels, const std::string& title) {
    constexpr double kSize = 480.0;
    constexpr double kLeft = 80.0;
    constexpr double kTop = 40.0;
    const double x0 = grid.offset_axis.front(), x1 = grid.offset_axis.back();
    const double y0 = grid.rf_axis.front(), y1 = grid.rf_axis.back();
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * kSize; };
    auto py = [&](double y) { return kTop + kSize - (y - y0) / (y1 - y0) * kSize; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(kLeft + kSize + 40.0)
       << "\" height=\"" << fixed(kTop + kSize + 70.0) << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(kSize) << "\" height=\""
       << fixed(kSize) << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (!title.empty()) {
        os << "<text x=\"" << fixed(kLeft + kSize / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
           << "</text>\n";
    }
    const std::array<double, 3> xt{x0, 0.5 * (x0 + x1), x1};
    const std::array<double, 3> yt{y0, 0.5 * (y0 + y1), y1};
    for (double t : xt) {
        os << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(kTop + kSize + 20.0)
           << "\" text-anchor=\"middle\" font-size=\"12\">" << csv::number(t, 4) << "</text>\n";
    }
    for (double t : yt) {
        os << "<text x=\"" << fixed(kLeft - 8.0) << "\" y=\"" << fixed(py(t) + 4.0)
           << "\" text-anchor=\"end\" font-size=\"12\">" << csv::number(t, 4) << "</text>\n";
    }
    os << "<text x=\"" << fixed(kLeft + kSize / 2) << "\" y=\"" << fixed(kTop + kSize + 50.0)
       << "\" text-anchor=\"middle\" font-size=\"14\">&#937;/&#969;&#8321;&#8304;</text>\n"
       << "<text x=\"20\" y=\"" << fixed(kTop + kSize / 2)
       << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " << fixed(kTop + kSize / 2)
       << ")\">&#969;&#8321;/&#969;&#8321;&#8304;</text>\n";

    auto emit_level = [&](double level, bool dashed) {
        const std::vector<Segment> segs = contour_segments(grid, level);
        if (segs.empty()) return;
        os << "<path class=\"level\" data-level=\"" << fixed(level) << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
           << (dashed ? "0.8" : "1.4") << "\"" << (dashed ? " stroke-dasharray=\"4 3\"" : "") << " d=\"";
        for (const Segment& s : segs) {
            os << 'M' << fixed(px(s.x0)) << ' ' << fixed(py(s.y0)) << 'L' << fixed(px(s.x1)) << ' ' << fixed(py(s.y1));
        }
        os << "\"/>\n";
    };
    for (double level : levels.solid) emit_level(level, false);
    for (double level : levels.dashed) emit_level(level, true);
    os << "</svg>\n";
    return os.str();
}

void contour_export(const FidelityGrid& grid, const std::filesystem::path& prefix, const Metadata& meta,
                    const ContourLevels& levels) {
    std::filesystem::path csv_path = prefix;
    csv_path += ".csv";
    std::filesystem::path svg_path = prefix;
    svg_path += ".svg";

    std::ofstream csv_out(csv_path, std::ios::binary);
    if (!csv_out) throw IoError("cannot write " + csv_path.string());
    write_grid_csv(grid, csv_out, meta);
    if (!csv_out) throw IoError("failed writing " + csv_path.string());

    std::ofstream svg_out(svg_path, std::ios::binary);
    if (!svg_out) throw IoError("cannot write " + svg_path.string());
    std::string title;
    for (const auto& [k, v] : meta) {
        if (k == "sequence") title = v;
    }
    svg_out << contour_svg(grid, levels, title);
    if (!svg_out) throw IoError("failed writing " + svg_path.string());
}

}  // namespace cpulse
