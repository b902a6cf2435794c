#include "trajroute/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <queue>
#include <thread>

#include "trajroute/rng.hpp"

namespace trajroute {

QuerySet generate_queries(const TrajectoryDB& db, std::size_t count, std::uint64_t seed,
                          double d_thres) {
    if (db.empty()) {
        throw EmptyDataset("generate_queries requires a non-empty trajectory DB");
    }
    if (count < 1) {
        throw Error("query count must be >= 1");
    }

    QuerySet qs;
    qs.seed = seed;
    qs.source = "sampled from " + std::to_string(db.trajectories.size()) + " trajectories";
    Rng rng = Rng(seed).split(0x71);

    const std::size_t max_draws = 100 * count;
    std::size_t draws = 0;
    while (qs.queries.size() < count) {
        if (draws >= max_draws) {
            throw InsufficientData("could not sample " + std::to_string(count) +
                                   " queries in " + std::to_string(max_draws) + " draws");
        }
        ++draws;
        const auto& t = db.trajectories[rng.below(db.trajectories.size())];
        const std::size_t n = t.points.size();
        const std::size_t start = rng.below(n - 1);
        const std::size_t end = start + 1 + rng.below(n - 1 - start);

        Query q;
        q.origin = t.points[start].pos;
        q.dest = t.points[end].pos;
        q.depart_ts = t.points[start].ts;
        if (haversine_m(q.origin, q.dest) < 2.0 * d_thres) {
            continue;  // degenerate query, redraw
        }
        qs.queries.push_back(q);
    }
    return qs;
}

double mae(const std::vector<double>& xs, const std::vector<double>& refs) {
    if (xs.size() != refs.size()) {
        throw LengthMismatch("mae: lists have different lengths");
    }
    if (xs.empty()) {
        throw LengthMismatch("mae: empty lists");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum += std::abs(xs[i] - refs[i]);
    }
    return sum / static_cast<double>(xs.size());
}

namespace {

struct OracleEntry {
    double f = 0.0;
    double g = 0.0;
    std::uint64_t seq = 0;
    std::uint32_t node = 0;
};

struct OracleCompare {
    bool operator()(const OracleEntry& a, const OracleEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g > b.g;
        return a.seq > b.seq;
    }
};

}  // namespace

OracleRoute dijkstra_oracle(const TransitionGraph& graph, const TrajectoryDB& db,
                            const RoadNetwork& net) {
    const std::size_t n = graph.node_count();
    std::vector<bool> is_target(n, false);
    for (const auto t : graph.targets) is_target[t] = true;

    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent_node(n, -1);
    std::vector<std::int32_t> parent_edge(n, -1);
    std::vector<bool> visited(n, false);

    std::priority_queue<OracleEntry, std::vector<OracleEntry>, OracleCompare> pq;
    std::uint64_t seq = 0;
    std::size_t expansions = 0;
    best[0] = 0.0;
    pq.push(OracleEntry{0.0, 0.0, seq++, 0});

    std::int64_t terminal = -1;
    while (!pq.empty()) {
        const OracleEntry top = pq.top();
        pq.pop();
        if (visited[top.node]) continue;
        if (is_target[top.node]) {
            terminal = top.node;
            break;
        }
        visited[top.node] = true;
        ++expansions;
        for (std::int32_t ei = 0; ei < static_cast<std::int32_t>(graph.adj[top.node].size());
             ++ei) {
            const auto& e = graph.adj[top.node][ei];
            if (visited[e.to]) continue;
            const double g_new = top.g + e.search_s;
            if (g_new >= best[e.to]) continue;
            best[e.to] = g_new;
            parent_node[e.to] = top.node;
            parent_edge[e.to] = ei;
            pq.push(OracleEntry{g_new, g_new, seq++, e.to});
        }
    }
    if (terminal < 0) {
        throw NoPathError(expansions, std::numeric_limits<double>::infinity());
    }

    OracleRoute r;
    r.cost = best[terminal];
    std::vector<std::uint32_t> chain;
    for (std::int64_t v = terminal; v >= 0; v = parent_node[v]) {
        chain.push_back(static_cast<std::uint32_t>(v));
        if (v == 0) break;
    }
    std::reverse(chain.begin(), chain.end());
    r.node_path = chain;

    r.geometry.push_back(graph.query.origin);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const auto& e = graph.adj[chain[i - 1]][parent_edge[chain[i]]];
        r.eta_s += e.base_s;
        const PointRef to_ref = graph.refs[e.to - 1];
        if (!e.from_origin && !is_continue(e.kind)) {
            r.geometry.push_back(resolve(db, net, *e.junction).pos);
        }
        r.geometry.push_back(resolve(db, net, to_ref).pos);
    }
    return r;
}

ReferenceTable load_reference(const std::string& path, std::size_t expected_count) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path + ": missing header", 1);
    }
    ReferenceTable table(expected_count);
    std::vector<bool> seen(expected_count, false);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t idx = 0;
        double eta = 0.0, dist = 0.0;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf", &idx, &eta, &dist) != 3) {
            throw ParseError(path + ": bad reference row", lineno);
        }
        if (idx >= expected_count) {
            throw ParseError(path + ": query_idx out of range", lineno);
        }
        table[idx] = ReferenceEntry{eta, dist};
        seen[idx] = true;
    }
    for (std::size_t i = 0; i < expected_count; ++i) {
        if (!seen[i]) {
            throw MissingReference(path + ": missing reference for query " + std::to_string(i));
        }
    }
    return table;
}

std::optional<SweepParam> sweep_param_from_name(const std::string& name) {
    if (name == "r_penalty") return SweepParam::RPenalty;
    if (name == "rw") return SweepParam::Rw;
    if (name == "w_time") return SweepParam::WTime;
    return std::nullopt;
}

std::string sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::RPenalty: return "r_penalty";
        case SweepParam::Rw: return "rw";
        case SweepParam::WTime: return "w_time";
    }
    return "?";
}

namespace {

struct QueryOutcome {
    bool routed = false;
    double eta_s = 0.0;
    double dist_m = 0.0;
    double road_legs = 0.0;
    double traj_switches = 0.0;
    double ms = 0.0;
};

// Runs every query against one index/param configuration, optionally on
// a worker pool, and aggregates one report row.
SweepRow run_row(const GridIndex& idx, const TrajectoryDB& db, const RoadNetwork& net,
                 const QuerySet& qs, const CostParams& params, double param_value,
                 const std::optional<ReferenceTable>& reference, const SweepOptions& opts) {
    const std::size_t n = qs.queries.size();
    std::vector<QueryOutcome> outcomes(n);
    std::vector<ReferenceEntry> oracle_refs(n);
    std::vector<bool> oracle_ok(n, false);

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n) break;
            const Query& q = qs.queries[i];
            QueryOutcome& out = outcomes[i];

            const auto t0 = std::chrono::steady_clock::now();
            try {
                const RouteResult r = find_path(idx, db, net, q, params, opts.search);
                out.routed = true;
                out.eta_s = r.eta_s;
                out.dist_m = path_length_m(r.path);
                out.road_legs = static_cast<double>(r.stats.road_legs);
                out.traj_switches = static_cast<double>(r.stats.traj_switches);
            } catch (const NoPathError&) {
                out.routed = false;
            }
            const auto t1 = std::chrono::steady_clock::now();
            out.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

            if (!reference.has_value()) {
                try {
                    const TransitionGraph g = materialize_transition_graph(
                        idx, db, net, q, params, opts.oracle_max_points, opts.search);
                    const OracleRoute o = dijkstra_oracle(g, db, net);
                    oracle_refs[i] = ReferenceEntry{o.eta_s, path_length_m(o.geometry)};
                    oracle_ok[i] = true;
                } catch (const NoPathError&) {
                    oracle_ok[i] = false;
                } catch (const TooLarge&) {
                    throw MissingReference(
                        "dataset too large for the internal oracle; supply a reference CSV");
                }
            }
        }
    };

    const std::size_t thread_count = std::max<std::size_t>(1, opts.threads);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mu;
        for (std::size_t t = 0; t < thread_count; ++t) {
            pool.emplace_back([&]() {
                try {
                    worker();
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    SweepRow row;
    row.param_value = param_value;
    std::vector<double> eta_x, eta_ref, dist_x, dist_ref;
    double road_sum = 0.0, switch_sum = 0.0, ms_sum = 0.0;
    std::size_t routed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& out = outcomes[i];
        ms_sum += out.ms;
        if (!out.routed) {
            ++row.no_path_count;
            continue;
        }
        ++routed;
        road_sum += out.road_legs;
        switch_sum += out.traj_switches;
        const ReferenceEntry* ref = nullptr;
        if (reference.has_value()) {
            ref = &(*reference)[i];
        } else if (oracle_ok[i]) {
            ref = &oracle_refs[i];
        }
        if (ref != nullptr) {
            eta_x.push_back(out.eta_s);
            eta_ref.push_back(ref->eta_s);
            dist_x.push_back(out.dist_m);
            dist_ref.push_back(ref->dist_m);
        }
    }
    if (!eta_x.empty()) {
        row.mae_time_s = mae(eta_x, eta_ref);
        row.mae_dist_m = mae(dist_x, dist_ref);
    }
    if (routed > 0) {
        row.avg_road_legs = road_sum / static_cast<double>(routed);
        row.avg_traj_switches = switch_sum / static_cast<double>(routed);
    }
    row.avg_query_ms = opts.record_timing ? ms_sum / static_cast<double>(n) : 0.0;
    return row;
}

CostParams with_param(const CostParams& base, SweepParam param, double value) {
    CostParams p = base;
    switch (param) {
        case SweepParam::RPenalty: p.r_penalty = value; break;
        case SweepParam::Rw: p.rw = value; break;
        case SweepParam::WTime: p.w_time = static_cast<std::int32_t>(value); break;
    }
    return p;
}

}  // namespace

SweepReport run_sweep(const GridIndex& idx, const TrajectoryDB& db, const RoadNetwork& net,
                      const QuerySet& qs, const CostParams& base, SweepParam param,
                      const std::vector<double>& values,
                      const std::optional<ReferenceTable>& reference, const SweepOptions& opts) {
    if (values.empty()) {
        throw Error("sweep requires at least one parameter value");
    }
    if (qs.queries.empty()) {
        throw Error("sweep requires at least one query");
    }
    SweepReport report;
    report.parameter = sweep_param_name(param);
    for (const double v : values) {
        const CostParams params = with_param(base, param, v);
        report.rows.push_back(run_row(idx, db, net, qs, params, v, reference, opts));
    }
    return report;
}

SweepReport coverage_ablation(const TrajectoryDB& db, const RoadNetwork& net,
                              const GridSpec& spec, const std::vector<double>& levels,
                              const QuerySet& qs, const CostParams& params,
                              const std::optional<ReferenceTable>& reference,
                              const SweepOptions& opts) {
    if (levels.empty()) {
        throw Error("coverage ablation requires at least one level");
    }
    SweepReport report;
    report.parameter = "coverage";
    for (const double level : levels) {
        const TrajectoryDB subset = coverage_subset(db, net, spec, level);
        const GridIndex idx = build_index(subset, net, spec);
        report.rows.push_back(run_row(idx, subset, net, qs, params, level, reference, opts));
    }
    return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << "param_value,mae_time_s,mae_dist_m,avg_road_legs,avg_traj_switches,"
           "avg_query_ms,no_path_count\n";
    char buf[256];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%zu\n", r.param_value,
                      r.mae_time_s, r.mae_dist_m, r.avg_road_legs, r.avg_traj_switches,
                      r.avg_query_ms, r.no_path_count);
        out << buf;
    }
}

void write_queries_csv(const QuerySet& qs, std::ostream& out) {
    out << "query_idx,origin_lat,origin_lon,dest_lat,dest_lon,depart_ts\n";
    char buf[320];
    for (std::size_t i = 0; i < qs.queries.size(); ++i) {
        const Query& q = qs.queries[i];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%lld\n", i, q.origin.lat,
                      q.origin.lon, q.dest.lat, q.dest.lon,
                      static_cast<long long>(q.depart_ts));
        out << buf;
    }
}

QuerySet load_queries_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path + ": missing header", 1);
    }
    QuerySet qs;
    qs.source = "loaded from " + path;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t idx = 0;
        Query q;
        long long depart = 0;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf,%lld", &idx, &q.origin.lat,
                        &q.origin.lon, &q.dest.lat, &q.dest.lon, &depart) != 6) {
            throw ParseError(path + ": bad query row", lineno);
        }
        q.depart_ts = depart;
        qs.queries.push_back(q);
    }
    if (qs.queries.empty()) {
        throw EmptyDataset(path + ": no queries");
    }
    return qs;
}

}  // namespace trajroute
