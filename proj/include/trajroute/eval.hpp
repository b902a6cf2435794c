#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trajroute/ingest.hpp"
#include "trajroute/search.hpp"

namespace trajroute {

// Reproducible batch of routing queries.
struct QuerySet {
    std::vector<Query> queries;
    std::uint64_t seed = 0;
    std::string source;
};

// Samples `count` queries by picking a trajectory, a start point, and a
// later end point uniformly; the start timestamp is the departure time.
// Queries shorter than 2 * d_thres straight-line are redrawn. Throws
// InsufficientData after 100 * count failed draws.
QuerySet generate_queries(const TrajectoryDB& db, std::size_t count, std::uint64_t seed,
                          double d_thres);

// Mean absolute error between paired lists.
double mae(const std::vector<double>& xs, const std::vector<double>& refs);

// Exact shortest path on a materialized transition graph by uniform-cost
// search, tie-breaking as find_path does. Used as the reference engine.
struct OracleRoute {
    double cost = 0.0;   // shortest search cost to the target set
    double eta_s = 0.0;  // base costs summed along that path
    std::vector<std::uint32_t> node_path;
    std::vector<GeoPoint> geometry;
};
OracleRoute dijkstra_oracle(const TransitionGraph& graph, const TrajectoryDB& db,
                            const RoadNetwork& net);

// External reference results, one row per query.
struct ReferenceEntry {
    double eta_s = 0.0;
    double dist_m = 0.0;
};
using ReferenceTable = std::vector<ReferenceEntry>;

// Reads `query_idx,ref_eta_s,ref_dist_m` rows.
ReferenceTable load_reference(const std::string& path, std::size_t expected_count);

struct SweepRow {
    double param_value = 0.0;
    double mae_time_s = 0.0;
    double mae_dist_m = 0.0;
    double avg_road_legs = 0.0;
    double avg_traj_switches = 0.0;
    double avg_query_ms = 0.0;
    std::size_t no_path_count = 0;
};

struct SweepReport {
    std::string parameter;
    std::vector<SweepRow> rows;
};

enum class SweepParam { RPenalty, Rw, WTime };

std::optional<SweepParam> sweep_param_from_name(const std::string& name);
std::string sweep_param_name(SweepParam p);

struct SweepOptions {
    std::size_t threads = 1;
    bool record_timing = true;            // when false, avg_query_ms is written as 0
    std::size_t oracle_max_points = 20'000;
    SearchOptions search;
};

// Runs every query at every parameter value. References come from the
// given table, or from the Dijkstra oracle when none is supplied (small
// fixtures only).
SweepReport run_sweep(const GridIndex& idx, const TrajectoryDB& db, const RoadNetwork& net,
                      const QuerySet& qs, const CostParams& base, SweepParam param,
                      const std::vector<double>& values,
                      const std::optional<ReferenceTable>& reference = std::nullopt,
                      const SweepOptions& opts = {});

// Rebuilds the index on a coverage subset per level and reports the same
// aggregates, one row per coverage level.
SweepReport coverage_ablation(const TrajectoryDB& db, const RoadNetwork& net,
                              const GridSpec& spec, const std::vector<double>& levels,
                              const QuerySet& qs, const CostParams& params,
                              const std::optional<ReferenceTable>& reference = std::nullopt,
                              const SweepOptions& opts = {});

// CSV: param_value,mae_time_s,mae_dist_m,avg_road_legs,avg_traj_switches,avg_query_ms,no_path_count
void write_sweep_csv(const SweepReport& report, std::ostream& out);

void write_queries_csv(const QuerySet& qs, std::ostream& out);
QuerySet load_queries_csv(const std::string& path);

}  // namespace trajroute
