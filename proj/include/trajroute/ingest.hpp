#pragma once

#include <iosfwd>
#include <string>

#include "trajroute/data.hpp"

namespace trajroute {

// Ingest filter thresholds: trajectories shorter than 500 m or briefer
// than 120 s are dropped at load time.
inline constexpr double kMinTrajectoryLengthM = 500.0;
inline constexpr std::int64_t kMinTrajectoryDurationS = 120;

// Default speed for road features missing a `speed_mps` property
// (about 30 mph) and the clamp applied so posted speeds never exceed
// the search heuristic's maximum.
struct RoadIngestOptions {
    double default_speed_mps = 13.4;
    double max_speed_mps = 31.29;
};

// Loads the trajectory CSV (`traj_id,lat,lon,ts`), groups rows by id,
// sorts each group by timestamp, and applies the length/duration
// filter. Trajectory order follows first appearance in the file.
TrajectoryDB load_trajectories(const std::string& path);
TrajectoryDB load_trajectories(std::istream& in, const std::string& name = "<stream>");

// Loads a GeoJSON FeatureCollection of LineString features with
// properties `id` and optional `speed_mps`.
RoadNetwork load_road_network(const std::string& path, const RoadIngestOptions& opts = {});
RoadNetwork load_road_network(std::istream& in, const RoadIngestOptions& opts = {},
                              const std::string& name = "<stream>");

// Fraction of road segments that share at least one grid cell with at
// least one trajectory point.
double spatial_coverage(const TrajectoryDB& db, const RoadNetwork& net, const GridSpec& spec);

// Prefix of `db` (in DB order) reaching at least `target` coverage,
// plus every later trajectory that adds no newly covered segment.
// Throws Unreachable when `target` exceeds the full dataset's coverage.
TrajectoryDB coverage_subset(const TrajectoryDB& db, const RoadNetwork& net,
                             const GridSpec& spec, double target);

}  // namespace trajroute
