#pragma once

#include <string>
#include <vector>

#include "hsd/common.hpp"

namespace hsd {

struct MapPoint {
    std::string id;
    std::string task;
    std::string gold;
    std::string pred;
    double x;
    double y;

    bool correct() const { return gold == pred; }
};

// Standalone SVG scatter: one marker per point (circle when the prediction
// is correct, cross otherwise), colored by (task, gold label); legend in the
// top-left, no axes. Colors are assigned to the distinct (task, label) keys
// in sorted order, so output bytes depend only on the points.
std::string render_map_svg(const std::vector<MapPoint>& points);

void write_map_svg(const std::vector<MapPoint>& points, const std::string& path);

// `id,task,gold,pred,x,y` with full-precision coordinates.
void write_coords_csv(const std::vector<MapPoint>& points, const std::string& path);

}  // namespace hsd
