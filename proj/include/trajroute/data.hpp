#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajroute/geo.hpp"

namespace trajroute {

struct TrajectoryPoint {
    GeoPoint pos;
    std::int64_t ts = 0;  // epoch seconds UTC
};

// One recorded trip: a timestamped GPS sequence with non-decreasing
// timestamps. After ingest filtering, total length >= 500 m and
// duration >= 120 s.
struct Trajectory {
    std::string id;
    std::vector<TrajectoryPoint> points;

    std::int64_t duration_s() const {
        return points.empty() ? 0 : points.back().ts - points.front().ts;
    }
    double length_m() const;
};

// Speed-limited road polyline.
struct RoadSegment {
    std::string id;
    std::vector<GeoPoint> points;
    double speed_limit_mps = 0.0;
};

struct TrajectoryDB {
    std::vector<Trajectory> trajectories;
    std::size_t dropped_count = 0;  // trajectories removed by the ingest filter

    bool empty() const { return trajectories.empty(); }
    std::size_t point_count() const;
};

struct RoadNetwork {
    std::vector<RoadSegment> segments;

    bool empty() const { return segments.empty(); }
    std::size_t point_count() const;
};

// Axis-aligned bounding box of all points of both datasets.
struct GeoBounds {
    double min_lat = 0.0, min_lon = 0.0;
    double max_lat = 0.0, max_lon = 0.0;
};
GeoBounds data_bounds(const TrajectoryDB& db, const RoadNetwork& net);

// Grid spec whose half-open bounding box strictly contains `bounds`,
// anchored at the south-west corner.
GridSpec make_grid_spec(const GeoBounds& bounds, double cell_size_m);

}  // namespace trajroute
