#include "trajroute/search.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

namespace trajroute {

namespace {

struct EdgeCandidate {
    PointRef to;
    TransitionKind kind = TransitionKind::TrajContinue;
    std::optional<PointRef> junction;
    CostPair cost;
};

// Transitions leaving an indexed point: the item's own successor, plus
// the successor of every admissible cell entry from another item.
std::vector<EdgeCandidate> point_edges(const GridIndex& idx, const TrajectoryDB& db,
                                       const RoadNetwork& net, const CostModel& model,
                                       const PointRef& u, const TemporalFilter& filter) {
    std::vector<EdgeCandidate> out;
    const ResolvedPoint ru = resolve(db, net, u);
    const bool u_is_traj = u.kind == SourceKind::Trajectory;

    if (ru.successor.has_value()) {
        EdgeCandidate e;
        e.to = *ru.successor;
        e.kind = u_is_traj ? TransitionKind::TrajContinue : TransitionKind::RoadContinue;
        e.cost = model.cost_final(Transition{u, e.to, e.kind});
        out.push_back(e);
    }

    const CellQueryResult entries = query_cell_split(idx, cell_of(ru.pos, idx.spec()), filter);
    auto add_switch = [&](const PointRef& entry, TransitionKind kind) {
        const ResolvedPoint re = resolve(db, net, entry);
        if (!re.successor.has_value()) return;  // entry is its item's last point
        EdgeCandidate e;
        e.to = *re.successor;
        e.kind = kind;
        e.junction = entry;
        e.cost = model.cost_final(Transition{u, e.to, e.kind});
        out.push_back(e);
    };
    for (const auto& entry : entries.traj) {
        if (u_is_traj && entry.item == u.item) continue;  // same trajectory: continue covers it
        add_switch(entry, u_is_traj ? TransitionKind::TrajSwitch : TransitionKind::CrossToTraj);
    }
    for (const auto& entry : entries.road) {
        if (!u_is_traj && entry.item == u.item) continue;  // same segment
        add_switch(entry, u_is_traj ? TransitionKind::CrossToRoad : TransitionKind::RoadSwitch);
    }
    return out;
}

// Bootstrap edges: every admissible entry in the origin's cell (and
// optionally the 8 surrounding cells), reached at tau_c with base 0.
std::vector<EdgeCandidate> origin_edges(const GridIndex& idx, const Query& q,
                                        const CostParams& params, const TemporalFilter& filter,
                                        const SearchOptions& opts) {
    std::vector<EdgeCandidate> out;
    const CellId center = cell_of(q.origin, idx.spec());
    std::vector<CellId> cells{center};
    if (opts.origin_adjacent_cells) {
        for (std::int32_t dr = -1; dr <= 1; ++dr) {
            for (std::int32_t dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const CellId c{center.col + dc, center.row + dr};
                if (c.col >= 0 && c.row >= 0 && c.col < idx.spec().cols && c.row < idx.spec().rows) {
                    cells.push_back(c);
                }
            }
        }
    }
    for (const auto& c : cells) {
        const CellQueryResult entries = query_cell_split(idx, c, filter);
        for (const auto& entry : entries.traj) {
            out.push_back(EdgeCandidate{entry, TransitionKind::TrajSwitch, std::nullopt,
                                        CostPair{0.0, params.tau_c}});
        }
        for (const auto& entry : entries.road) {
            out.push_back(EdgeCandidate{entry, TransitionKind::RoadSwitch, std::nullopt,
                                        CostPair{0.0, params.tau_c}});
        }
    }
    return out;
}

}  // namespace

TemporalFilter filter_for(const Query& q, const CostParams& params) {
    TemporalFilter f;
    f.query_tod = time_of_day_s(q.depart_ts);
    f.window_s = params.w_time;
    f.day = day_class(q.depart_ts);
    return f;
}

std::vector<NeighborCandidate> get_neighbors(const GridIndex& idx, const TrajectoryDB& db,
                                             const RoadNetwork& net, const SearchNodeView& node,
                                             const Query& q, const CostParams& params) {
    const CostModel model(db, net, params);
    const TemporalFilter filter = filter_for(q, params);
    std::vector<NeighborCandidate> out;
    for (const auto& e : point_edges(idx, db, net, model, node.ref, filter)) {
        NeighborCandidate c;
        c.ref = e.to;
        c.transition = Transition{node.ref, e.to, e.kind};
        c.junction = e.junction;
        c.cost = e.cost;
        c.f = node.g_search + e.cost.search_s +
              model.heuristic(resolve(db, net, e.to).pos, q.dest);
        out.push_back(c);
    }
    return out;
}

namespace {

struct NodeRec {
    PointRef ref;
    bool is_origin = false;
    bool via_bootstrap = false;
    TransitionKind kind = TransitionKind::TrajContinue;
    std::optional<PointRef> junction;
    double g_search = 0.0;
    double g_base = 0.0;
    std::int64_t parent = -1;
};

struct PQEntry {
    double f = 0.0;
    double g = 0.0;
    std::uint64_t seq = 0;
    std::size_t node = 0;
};

// Min-order on f, ties by lower g, then by insertion sequence.
struct PQCompare {
    bool operator()(const PQEntry& a, const PQEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g > b.g;
        return a.seq > b.seq;
    }
};

constexpr std::uint64_t kOriginKey = ~std::uint64_t{0};

RouteResult trivial_route(const GeoPoint& origin) {
    RouteResult r;
    r.path.push_back(origin);
    r.eta_s = 0.0;
    return r;
}

RouteResult reconstruct(const TrajectoryDB& db, const RoadNetwork& net, const Query& q,
                        const std::vector<NodeRec>& nodes, std::size_t terminal,
                        SearchStats stats) {
    std::vector<std::size_t> chain;
    for (std::int64_t i = static_cast<std::int64_t>(terminal); i >= 0; i = nodes[i].parent) {
        chain.push_back(static_cast<std::size_t>(i));
        if (nodes[i].is_origin) break;
    }
    std::reverse(chain.begin(), chain.end());

    RouteResult r;
    r.path.push_back(q.origin);
    r.eta_s = nodes[terminal].g_base;

    auto item_id = [&](const PointRef& ref) {
        return ref.kind == SourceKind::Trajectory ? db.trajectories[ref.item].id
                                                  : net.segments[ref.item].id;
    };
    auto open_leg = [&](const PointRef& ref, std::uint32_t from_idx, bool switched) {
        RouteLeg leg;
        leg.kind = ref.kind;
        leg.item = ref.item;
        leg.item_id = item_id(ref);
        leg.from_idx = from_idx;
        leg.to_idx = ref.point;
        leg.entered_by_switch = switched;
        r.legs.push_back(leg);
    };

    for (std::size_t ci = 1; ci < chain.size(); ++ci) {  // chain[0] is the origin node
        const NodeRec& n = nodes[chain[ci]];
        const ResolvedPoint rp = resolve(db, net, n.ref);
        if (n.via_bootstrap) {
            r.path.push_back(rp.pos);
            open_leg(n.ref, n.ref.point, /*switched=*/false);
        } else if (is_continue(n.kind)) {
            r.path.push_back(rp.pos);
            r.legs.back().to_idx = n.ref.point;
        } else {
            const ResolvedPoint rj = resolve(db, net, *n.junction);
            r.path.push_back(rj.pos);
            r.path.push_back(rp.pos);
            open_leg(n.ref, n.junction->point, /*switched=*/true);
            if (n.kind == TransitionKind::TrajSwitch) ++stats.traj_switches;
        }
    }
    for (const auto& leg : r.legs) {
        if (leg.kind == SourceKind::Road) ++stats.road_legs;
    }
    r.stats = stats;
    return r;
}

}  // namespace

RouteResult find_path(const GridIndex& idx, const TrajectoryDB& db, const RoadNetwork& net,
                      const Query& q, const CostParams& params, const SearchOptions& opts) {
    params.validate();
    if (!valid_point(q.origin) || !valid_point(q.dest)) {
        throw Error("query coordinates invalid");
    }
    if (!in_bounds(q.origin, idx.spec())) {
        throw OutOfBounds("query origin outside the index bounding box");
    }
    if (!in_bounds(q.dest, idx.spec())) {
        throw OutOfBounds("query destination outside the index bounding box");
    }
    if (q.origin == q.dest) {
        return trivial_route(q.origin);
    }

    const CostModel model(db, net, params);
    const TemporalFilter filter = filter_for(q, params);

    std::vector<NodeRec> nodes;
    NodeRec origin;
    origin.is_origin = true;
    nodes.push_back(origin);

    std::priority_queue<PQEntry, std::vector<PQEntry>, PQCompare> frontier;
    std::unordered_set<std::uint64_t> visited;
    std::unordered_map<std::uint64_t, double> g_map;
    std::uint64_t seq = 0;

    frontier.push(PQEntry{model.heuristic(q.origin, q.dest), 0.0, seq++, 0});
    g_map[kOriginKey] = 0.0;

    SearchStats stats;
    double nearest_m = haversine_m(q.origin, q.dest);

    while (!frontier.empty()) {
        stats.frontier_peak = std::max(stats.frontier_peak, frontier.size());
        const PQEntry top = frontier.top();
        frontier.pop();
        const NodeRec& cur = nodes[top.node];
        const std::uint64_t cur_key = cur.is_origin ? kOriginKey : cur.ref.key();
        if (visited.count(cur_key)) continue;

        const GeoPoint cur_pos = cur.is_origin ? q.origin : resolve(db, net, cur.ref).pos;
        const double dist = haversine_m(cur_pos, q.dest);
        nearest_m = std::min(nearest_m, dist);
        if (dist < params.d_thres) {
            return reconstruct(db, net, q, nodes, top.node, stats);
        }

        visited.insert(cur_key);
        ++stats.expansions;

        // Copy what we need: pushes below may reallocate `nodes`.
        const bool cur_is_origin = cur.is_origin;
        const double g_cur = cur.g_search;
        const double b_cur = cur.g_base;
        const std::vector<EdgeCandidate> edges =
            cur_is_origin ? origin_edges(idx, q, params, filter, opts)
                          : point_edges(idx, db, net, model, cur.ref, filter);
        for (const auto& e : edges) {
            const std::uint64_t key = e.to.key();
            if (visited.count(key)) continue;
            const double g_new = g_cur + e.cost.search_s;
            const auto it = g_map.find(key);
            if (it != g_map.end() && g_new >= it->second) continue;
            g_map[key] = g_new;

            NodeRec rec;
            rec.ref = e.to;
            rec.via_bootstrap = cur_is_origin;
            rec.kind = e.kind;
            rec.junction = e.junction;
            rec.g_search = g_new;
            rec.g_base = b_cur + e.cost.base_s;
            rec.parent = static_cast<std::int64_t>(top.node);
            nodes.push_back(rec);

            const double f = g_new + model.heuristic(resolve(db, net, e.to).pos, q.dest);
            frontier.push(PQEntry{f, g_new, seq++, nodes.size() - 1});
        }
    }
    throw NoPathError(stats.expansions, nearest_m);
}

std::uint32_t TransitionGraph::node_of(const PointRef& ref) const {
    for (std::uint32_t i = 0; i < refs.size(); ++i) {
        if (refs[i] == ref) return i + 1;
    }
    throw InvalidRef("ref not present in transition graph");
}

TransitionGraph materialize_transition_graph(const GridIndex& idx, const TrajectoryDB& db,
                                             const RoadNetwork& net, const Query& q,
                                             const CostParams& params, std::size_t max_points,
                                             const SearchOptions& opts) {
    const std::size_t total = db.point_count() + net.point_count();
    if (total > max_points) {
        throw TooLarge("refusing to materialize " + std::to_string(total) +
                       " points (limit " + std::to_string(max_points) + ")");
    }
    params.validate();

    TransitionGraph g;
    g.query = q;
    g.refs.reserve(total);
    std::unordered_map<std::uint64_t, std::uint32_t> id_of;
    for (std::uint32_t ti = 0; ti < db.trajectories.size(); ++ti) {
        for (std::uint32_t pi = 0; pi < db.trajectories[ti].points.size(); ++pi) {
            const PointRef ref{SourceKind::Trajectory, ti, pi};
            id_of[ref.key()] = static_cast<std::uint32_t>(g.refs.size()) + 1;
            g.refs.push_back(ref);
        }
    }
    for (std::uint32_t si = 0; si < net.segments.size(); ++si) {
        for (std::uint32_t pi = 0; pi < net.segments[si].points.size(); ++pi) {
            const PointRef ref{SourceKind::Road, si, pi};
            id_of[ref.key()] = static_cast<std::uint32_t>(g.refs.size()) + 1;
            g.refs.push_back(ref);
        }
    }

    const CostModel model(db, net, params);
    const TemporalFilter filter = filter_for(q, params);
    g.adj.resize(g.refs.size() + 1);

    for (const auto& e : origin_edges(idx, q, params, filter, opts)) {
        g.adj[0].push_back(TransitionGraph::Edge{id_of.at(e.to.key()), e.cost.search_s,
                                                 e.cost.base_s, e.kind, true, std::nullopt});
    }
    for (std::uint32_t i = 0; i < g.refs.size(); ++i) {
        for (const auto& e : point_edges(idx, db, net, model, g.refs[i], filter)) {
            g.adj[i + 1].push_back(TransitionGraph::Edge{id_of.at(e.to.key()), e.cost.search_s,
                                                         e.cost.base_s, e.kind, false,
                                                         e.junction});
        }
    }
    for (std::uint32_t i = 0; i < g.refs.size(); ++i) {
        if (haversine_m(resolve(db, net, g.refs[i]).pos, q.dest) < params.d_thres) {
            g.targets.push_back(i + 1);
        }
    }
    return g;
}

}  // namespace trajroute
