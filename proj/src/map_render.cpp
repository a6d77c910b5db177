#include "hsd/map_render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "hsd/csv.hpp"

namespace hsd {
namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 600;
constexpr double kMargin = 40;

constexpr const char* kPalette[] = {
    "#e63946", "#457b9d", "#2a9d8f", "#f4a261", "#9b5de5",
    "#264653", "#e76f51", "#00b4d8", "#bc6c25", "#6a994e",
};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

std::string fixed2(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    (void)ec;
    return std::string(buf, ptr);
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string render_map_svg(const std::vector<MapPoint>& points) {
    if (points.empty()) throw DataError("no points to draw");
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw DataError("point " + p.id + " has non-finite coordinates");
        }
    }

    std::map<std::pair<std::string, std::string>, std::string> colors;
    for (const auto& p : points) colors[{p.task, p.gold}];
    std::size_t slot = 0;
    for (auto& [key, color] : colors) color = kPalette[slot++ % kPaletteSize];

    double x_lo = points[0].x, x_hi = points[0].x;
    double y_lo = points[0].y, y_hi = points[0].y;
    for (const auto& p : points) {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    }
    const double x_span = x_hi > x_lo ? x_hi - x_lo : 1;
    const double y_span = y_hi > y_lo ? y_hi - y_lo : 1;
    const auto sx = [&](double x) {
        return kMargin + (x - x_lo) / x_span * (kWidth - 2 * kMargin);
    };
    // SVG y grows downward; flip so larger y plots higher.
    const auto sy = [&](double y) {
        return kHeight - kMargin - (y - y_lo) / y_span * (kHeight - 2 * kMargin);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"600\" viewBox=\"0 0 800 600\">\n";
    svg += "<rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";

    for (const auto& p : points) {
        const std::string& color = colors[{p.task, p.gold}];
        const double cx = sx(p.x);
        const double cy = sy(p.y);
        if (p.correct()) {
            svg += "<circle class=\"pt\" cx=\"" + fixed2(cx) + "\" cy=\"" + fixed2(cy) +
                   "\" r=\"4\" fill=\"" + color + "\" fill-opacity=\"0.8\"/>\n";
        } else {
            svg += "<path class=\"pt\" d=\"M " + fixed2(cx - 4) + " " + fixed2(cy - 4) + " L " +
                   fixed2(cx + 4) + " " + fixed2(cy + 4) + " M " + fixed2(cx - 4) + " " +
                   fixed2(cy + 4) + " L " + fixed2(cx + 4) + " " + fixed2(cy - 4) +
                   "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        }
    }

    double ly = 24;
    for (const auto& [key, color] : colors) {
        svg += "<rect x=\"16\" y=\"" + fixed2(ly - 10) + "\" width=\"12\" height=\"12\" fill=\"" +
               color + "\"/>\n";
        svg += "<text x=\"34\" y=\"" + fixed2(ly) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + escape_xml(key.first) + " / " +
               escape_xml(key.second) + "</text>\n";
        ly += 18;
    }
    svg += "<text x=\"16\" y=\"" + fixed2(ly) +
           "\" font-family=\"sans-serif\" font-size=\"13\">circle = correct, cross = "
           "incorrect</text>\n";
    svg += "</svg>\n";
    return svg;
}

void write_map_svg(const std::vector<MapPoint>& points, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write map: " + path);
    out << render_map_svg(points);
}

void write_coords_csv(const std::vector<MapPoint>& points, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write coordinates: " + path);
    write_csv_row(out, {"id", "task", "gold", "pred", "x", "y"});
    for (const auto& p : points) {
        write_csv_row(out, {p.id, p.task, p.gold, p.pred, shortest(p.x), shortest(p.y)});
    }
}

}  // namespace hsd
