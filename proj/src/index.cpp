#include "trajroute/index.hpp"

#include <algorithm>

namespace trajroute {

namespace {

// Circular time-of-day distance in seconds.
std::int32_t tod_distance(std::int32_t a, std::int32_t b) {
    std::int32_t d = a - b;
    if (d < 0) d = -d;
    return std::min(d, kSecondsPerDay - d);
}

struct TodLess {
    bool operator()(const TrajEntry& e, std::int32_t tod) const { return e.tod < tod; }
    bool operator()(std::int32_t tod, const TrajEntry& e) const { return tod < e.tod; }
};

// Appends refs of entries with tod in [lo, hi] that match the day class.
void collect_range(const std::vector<TrajEntry>& entries, std::int32_t lo, std::int32_t hi,
                   DayClass day, std::vector<PointRef>& out) {
    auto begin = std::lower_bound(entries.begin(), entries.end(), lo, TodLess{});
    auto end = std::upper_bound(entries.begin(), entries.end(), hi, TodLess{});
    for (auto it = begin; it != end; ++it) {
        if (it->day == day) out.push_back(it->ref);
    }
}

}  // namespace

bool TemporalFilter::matches(std::int32_t tod, DayClass d) const {
    if (d != day) return false;
    if (2 * window_s >= kSecondsPerDay) return true;
    return tod_distance(tod, query_tod) <= window_s;
}

const GridCell* GridIndex::cell(const CellId& id) const {
    const auto it = cells_.find(cell_key(id));
    return it == cells_.end() ? nullptr : &it->second;
}

std::vector<CellId> GridIndex::occupied_cells() const {
    std::vector<CellId> ids;
    ids.reserve(cells_.size());
    for (const auto& [key, cell] : cells_) {
        ids.push_back(CellId{static_cast<std::int32_t>(key & 0xffffffffu),
                             static_cast<std::int32_t>(key >> 32)});
    }
    std::sort(ids.begin(), ids.end(), [](const CellId& a, const CellId& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return ids;
}

GridIndex build_index(const TrajectoryDB& db, const RoadNetwork& net, const GridSpec& spec) {
    std::unordered_map<std::uint64_t, GridCell> cells;
    IndexStats stats;

    for (std::uint32_t ti = 0; ti < db.trajectories.size(); ++ti) {
        const auto& t = db.trajectories[ti];
        for (std::uint32_t pi = 0; pi < t.points.size(); ++pi) {
            const auto& pt = t.points[pi];
            const CellId cid = cell_of(pt.pos, spec);
            TrajEntry entry;
            entry.tod = time_of_day_s(pt.ts);
            entry.day = day_class(pt.ts);
            entry.ref = PointRef{SourceKind::Trajectory, ti, pi};
            cells[GridIndex::cell_key(cid)].traj_entries.push_back(entry);
            ++stats.traj_points;
        }
    }
    for (std::uint32_t si = 0; si < net.segments.size(); ++si) {
        const auto& s = net.segments[si];
        for (std::uint32_t pi = 0; pi < s.points.size(); ++pi) {
            const CellId cid = cell_of(s.points[pi], spec);
            cells[GridIndex::cell_key(cid)].road_entries.push_back(
                PointRef{SourceKind::Road, si, pi});
            ++stats.road_points;
        }
    }

    // Stable sort keeps insertion order among equal time-of-day keys, so
    // identical inputs always produce identical iteration.
    for (auto& [key, cell] : cells) {
        std::stable_sort(cell.traj_entries.begin(), cell.traj_entries.end(),
                         [](const TrajEntry& a, const TrajEntry& b) { return a.tod < b.tod; });
    }
    stats.cells_used = cells.size();
    return GridIndex(spec, std::move(cells), stats);
}

CellQueryResult query_cell_split(const GridIndex& idx, const CellId& cell,
                                 const std::optional<TemporalFilter>& filter) {
    CellQueryResult out;
    const GridCell* c = idx.cell(cell);
    if (c == nullptr) return out;

    if (!filter.has_value()) {
        out.traj.reserve(c->traj_entries.size());
        for (const auto& e : c->traj_entries) out.traj.push_back(e.ref);
    } else if (2 * filter->window_s >= kSecondsPerDay) {
        for (const auto& e : c->traj_entries) {
            if (e.day == filter->day) out.traj.push_back(e.ref);
        }
    } else {
        const std::int32_t lo =
            ((filter->query_tod - filter->window_s) % kSecondsPerDay + kSecondsPerDay) %
            kSecondsPerDay;
        const std::int32_t hi = (filter->query_tod + filter->window_s) % kSecondsPerDay;
        if (lo <= hi) {
            collect_range(c->traj_entries, lo, hi, filter->day, out.traj);
        } else {
            // Window wraps midnight: [lo, end-of-day] then [start-of-day, hi].
            collect_range(c->traj_entries, lo, kSecondsPerDay - 1, filter->day, out.traj);
            collect_range(c->traj_entries, 0, hi, filter->day, out.traj);
        }
    }

    out.road = c->road_entries;
    return out;
}

std::vector<PointRef> query_cell(const GridIndex& idx, const CellId& cell,
                                 const std::optional<TemporalFilter>& filter) {
    CellQueryResult split = query_cell_split(idx, cell, filter);
    std::vector<PointRef> out = std::move(split.traj);
    out.insert(out.end(), split.road.begin(), split.road.end());
    return out;
}

ResolvedPoint resolve(const TrajectoryDB& db, const RoadNetwork& net, const PointRef& ref) {
    ResolvedPoint r;
    if (ref.kind == SourceKind::Trajectory) {
        if (ref.item >= db.trajectories.size()) {
            throw InvalidRef("trajectory index out of range");
        }
        const auto& t = db.trajectories[ref.item];
        if (ref.point >= t.points.size()) {
            throw InvalidRef("point index out of range for trajectory " + t.id);
        }
        r.pos = t.points[ref.point].pos;
        r.ts = t.points[ref.point].ts;
        if (ref.point > 0) {
            r.predecessor = PointRef{ref.kind, ref.item, ref.point - 1};
        }
        if (ref.point + 1 < t.points.size()) {
            r.successor = PointRef{ref.kind, ref.item, ref.point + 1};
        }
    } else {
        if (ref.item >= net.segments.size()) {
            throw InvalidRef("segment index out of range");
        }
        const auto& s = net.segments[ref.item];
        if (ref.point >= s.points.size()) {
            throw InvalidRef("point index out of range for segment " + s.id);
        }
        r.pos = s.points[ref.point];
        if (ref.point > 0) {
            r.predecessor = PointRef{ref.kind, ref.item, ref.point - 1};
        }
        if (ref.point + 1 < s.points.size()) {
            r.successor = PointRef{ref.kind, ref.item, ref.point + 1};
        }
    }
    return r;
}

}  // namespace trajroute
