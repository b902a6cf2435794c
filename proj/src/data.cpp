#include "trajroute/data.hpp"

#include <algorithm>
#include <cmath>

namespace trajroute {

double Trajectory::length_m() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        total += haversine_m(points[i - 1].pos, points[i].pos);
    }
    return total;
}

std::size_t TrajectoryDB::point_count() const {
    std::size_t n = 0;
    for (const auto& t : trajectories) n += t.points.size();
    return n;
}

std::size_t RoadNetwork::point_count() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.points.size();
    return n;
}

GeoBounds data_bounds(const TrajectoryDB& db, const RoadNetwork& net) {
    GeoBounds b;
    bool first = true;
    auto take = [&](const GeoPoint& p) {
        if (first) {
            b.min_lat = b.max_lat = p.lat;
            b.min_lon = b.max_lon = p.lon;
            first = false;
            return;
        }
        b.min_lat = std::min(b.min_lat, p.lat);
        b.max_lat = std::max(b.max_lat, p.lat);
        b.min_lon = std::min(b.min_lon, p.lon);
        b.max_lon = std::max(b.max_lon, p.lon);
    };
    for (const auto& t : db.trajectories)
        for (const auto& pt : t.points) take(pt.pos);
    for (const auto& s : net.segments)
        for (const auto& p : s.points) take(p);
    if (first) {
        throw EmptyDataset("cannot compute bounds of empty datasets");
    }
    return b;
}

GridSpec make_grid_spec(const GeoBounds& bounds, double cell_size_m) {
    GridSpec spec;
    spec.origin = GeoPoint{bounds.min_lat, bounds.min_lon};
    spec.cell_size_m = cell_size_m;
    const LocalOffset extent =
        local_offset_m(spec.origin, GeoPoint{bounds.max_lat, bounds.max_lon});
    // floor + 1 keeps the max point strictly inside the half-open box.
    spec.cols = static_cast<std::int32_t>(std::floor(extent.east_m / cell_size_m)) + 1;
    spec.rows = static_cast<std::int32_t>(std::floor(extent.north_m / cell_size_m)) + 1;
    return spec;
}

}  // namespace trajroute
