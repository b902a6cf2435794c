#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "trajroute/data.hpp"

namespace trajroute {

enum class SourceKind : std::uint8_t { Trajectory = 0, Road = 1 };

// Handle resolving into either dataset: (kind, item index, point index).
struct PointRef {
    SourceKind kind = SourceKind::Trajectory;
    std::uint32_t item = 0;
    std::uint32_t point = 0;

    bool operator==(const PointRef& o) const {
        return kind == o.kind && item == o.item && point == o.point;
    }
    bool operator!=(const PointRef& o) const { return !(*this == o); }

    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(kind) << 63) |
               (static_cast<std::uint64_t>(item) << 32) | point;
    }
};

struct PointRefHash {
    std::size_t operator()(const PointRef& r) const { return std::hash<std::uint64_t>{}(r.key()); }
};

// One trajectory point reference keyed by its recorded time of day.
struct TrajEntry {
    std::int32_t tod = 0;  // seconds since UTC midnight
    DayClass day = DayClass::Weekday;
    PointRef ref;
};

// Cell contents: trajectory entries sorted by time of day (range
// lookups are binary searches), road entries in insertion order.
// Road points carry no temporal key.
struct GridCell {
    std::vector<TrajEntry> traj_entries;
    std::vector<PointRef> road_entries;
};

struct IndexStats {
    std::size_t cells_used = 0;
    std::size_t traj_points = 0;
    std::size_t road_points = 0;
};

// Recorded-time window around a query: time of day +/- window seconds
// (wrapping across midnight) on matching weekday/weekend days.
struct TemporalFilter {
    std::int32_t query_tod = 0;
    std::int32_t window_s = 0;
    DayClass day = DayClass::Weekday;

    bool matches(std::int32_t tod, DayClass d) const;
};

class GridIndex {
public:
    GridIndex() = default;
    GridIndex(GridSpec spec, std::unordered_map<std::uint64_t, GridCell> cells, IndexStats stats)
        : spec_(std::move(spec)), cells_(std::move(cells)), stats_(stats) {}

    const GridSpec& spec() const { return spec_; }
    const IndexStats& stats() const { return stats_; }

    static std::uint64_t cell_key(const CellId& c) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.row)) << 32) |
               static_cast<std::uint32_t>(c.col);
    }

    // nullptr when the cell is empty.
    const GridCell* cell(const CellId& id) const;

    // Cell ids in (row, col) order, for deterministic whole-index walks.
    std::vector<CellId> occupied_cells() const;

private:
    GridSpec spec_;
    std::unordered_map<std::uint64_t, GridCell> cells_;
    IndexStats stats_;
};

// Inserts every trajectory measurement (keyed by time of day) and every
// road point into its grid cell. All points must fall inside the spec's
// bounding box.
GridIndex build_index(const TrajectoryDB& db, const RoadNetwork& net, const GridSpec& spec);

// All road refs in the cell, plus trajectory refs passing the filter.
// Trajectory refs come in ascending time-of-day order (window order when
// it wraps midnight); with no filter, every entry is returned.
std::vector<PointRef> query_cell(const GridIndex& idx, const CellId& cell,
                                 const std::optional<TemporalFilter>& filter);

// Same as query_cell but yields trajectory refs and road refs separately.
struct CellQueryResult {
    std::vector<PointRef> traj;
    std::vector<PointRef> road;
};
CellQueryResult query_cell_split(const GridIndex& idx, const CellId& cell,
                                 const std::optional<TemporalFilter>& filter);

struct ResolvedPoint {
    GeoPoint pos;
    std::optional<std::int64_t> ts;  // absent for road points
    std::optional<PointRef> predecessor;
    std::optional<PointRef> successor;
};

// Dereferences `ref` against the stores it was built from.
ResolvedPoint resolve(const TrajectoryDB& db, const RoadNetwork& net, const PointRef& ref);

}  // namespace trajroute
