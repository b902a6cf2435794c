#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajroute/cost.hpp"
#include "trajroute/data.hpp"
#include "trajroute/rng.hpp"
#include "trajroute/search.hpp"

namespace trajroute::testing {

// Monday 2023-01-02 00:00:00 UTC; all fixture timestamps are offsets
// into this day unless stated otherwise.
inline constexpr std::int64_t kMonday = 1'672'617'600;
// Saturday 2023-01-07 00:00:00 UTC.
inline constexpr std::int64_t kSaturday = 1'673'049'600;

// Inverse of the engine's local projection: the point at the given
// east/north offsets from `anchor`.
GeoPoint offset_point(const GeoPoint& anchor, double east_m, double north_m);

Trajectory make_traj(std::string id, const std::vector<std::pair<LocalOffset, std::int64_t>>& pts,
                     const GeoPoint& anchor);
RoadSegment make_seg(std::string id, const std::vector<LocalOffset>& pts, double speed,
                     const GeoPoint& anchor);

struct Fixture {
    TrajectoryDB db;
    RoadNetwork net;
    GridSpec spec;
    CostParams params;
    std::vector<Query> queries;
};

// Straight 1 km corridor with a fast road and a slower trajectory on
// identical geometry. The optimal route is all-road at r_penalty = 0 and
// all-trajectory at r_penalty = 3.
Fixture flip_fixture();

// 1.5 km corridor fully covered by a trajectory recorded around 14:00;
// queries depart at 08:00, so they reach the trajectory only when the
// temporal window is wide.
Fixture full_coverage_fixture();

// 2 km corridor where trajectories listed first cover only the west
// half. Queries cross the whole corridor.
Fixture disjoint_halves_fixture();
double disjoint_halves_west_coverage();

// Two trajectories sharing one cell mid-way; the route must hop.
Fixture hop_fixture();

// Randomized small-world fixture for oracle comparisons. Vehicle and
// road speeds stay at or below 10 m/s and charged hops are at least
// 150 m, which keeps the straight-line heuristic consistent; the
// destination is sampled so exactly one indexed point lies within
// d_thres, keeping the optimal terminal unambiguous.
struct RandomFixtureOptions {
    double r_penalty = 0.0;
    double tau_c = 0.0;
    std::size_t min_trajectories = 6;
    std::size_t max_trajectories = 14;
};
Fixture random_fixture(Rng& rng, const RandomFixtureOptions& opts);

// Large synthetic city for throughput measurements.
Fixture perf_fixture(std::size_t trajectory_count, std::size_t points_per_trajectory,
                     std::uint64_t seed);

// Re-derives the ETA of a route from its leg spans and the raw stores,
// walking legs in order so the floating-point sum matches the search's
// own accumulation exactly.
double recompute_eta(const RouteResult& route, const TrajectoryDB& db, const RoadNetwork& net,
                     const CostParams& params);

}  // namespace trajroute::testing
