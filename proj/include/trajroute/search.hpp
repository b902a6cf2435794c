#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trajroute/cost.hpp"

namespace trajroute {

// Origin, destination, departure time.
struct Query {
    GeoPoint origin;
    GeoPoint dest;
    std::int64_t depart_ts = 0;
};

// The recorded-time filter applied to trajectory entries for `q`.
TemporalFilter filter_for(const Query& q, const CostParams& params);

struct SearchOptions {
    // Also bootstrap from the 8 cells around the origin's cell.
    bool origin_adjacent_cells = false;
};

// One contiguous run of route points on a single trajectory or segment.
struct RouteLeg {
    SourceKind kind = SourceKind::Trajectory;
    std::uint32_t item = 0;
    std::string item_id;
    std::uint32_t from_idx = 0;
    std::uint32_t to_idx = 0;
    bool entered_by_switch = false;  // whether tau_c was charged on entry
};

struct SearchStats {
    std::size_t expansions = 0;
    std::size_t frontier_peak = 0;
    std::size_t road_legs = 0;
    std::size_t traj_switches = 0;
};

struct RouteResult {
    std::vector<GeoPoint> path;
    double eta_s = 0.0;     // accumulated base costs
    std::vector<RouteLeg> legs;
    SearchStats stats;
};

// A settled node, as seen by neighbor generation.
struct SearchNodeView {
    PointRef ref;
    double g_search = 0.0;
};

struct NeighborCandidate {
    PointRef ref;
    Transition transition;
    std::optional<PointRef> junction;  // predecessor(ref) for switch moves
    CostPair cost;
    double f = 0.0;
};

// Neighbors of `node`: its own successor (no temporal constraint) plus,
// for every cell entry passing the query's temporal filter (road entries
// always pass), that entry's successor as a switch target. f includes
// the heuristic toward q.dest.
std::vector<NeighborCandidate> get_neighbors(const GridIndex& idx, const TrajectoryDB& db,
                                             const RoadNetwork& net, const SearchNodeView& node,
                                             const Query& q, const CostParams& params);

// A*-style best-first search from a virtual origin node over the grid
// index, terminating when a dequeued point lies within d_thres of the
// destination. Throws NoPathError when the frontier empties first.
RouteResult find_path(const GridIndex& idx, const TrajectoryDB& db, const RoadNetwork& net,
                      const Query& q, const CostParams& params,
                      const SearchOptions& opts = {});

// Explicit weighted graph of every transition the search could take for
// `q`. Node 0 is the virtual origin; node i+1 corresponds to refs[i].
struct TransitionGraph {
    struct Edge {
        std::uint32_t to = 0;
        double search_s = 0.0;
        double base_s = 0.0;
        TransitionKind kind = TransitionKind::TrajContinue;
        bool from_origin = false;
        std::optional<PointRef> junction;
    };

    Query query;
    std::vector<PointRef> refs;
    std::vector<std::vector<Edge>> adj;   // size refs.size() + 1
    std::vector<std::uint32_t> targets;   // node ids within d_thres of dest

    std::uint32_t node_of(const PointRef& ref) const;
    std::size_t node_count() const { return refs.size() + 1; }
};

// Enumerates the full transition graph for small fixtures. Throws
// TooLarge when the datasets exceed `max_points`.
TransitionGraph materialize_transition_graph(const GridIndex& idx, const TrajectoryDB& db,
                                             const RoadNetwork& net, const Query& q,
                                             const CostParams& params,
                                             std::size_t max_points = 20'000,
                                             const SearchOptions& opts = {});

}  // namespace trajroute
