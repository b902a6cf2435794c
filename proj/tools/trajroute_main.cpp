#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajroute/config.hpp"
#include "trajroute/eval.hpp"
#include "trajroute/geojson.hpp"
#include "trajroute/ingest.hpp"
#include "trajroute/snapshot.hpp"

namespace {

using namespace trajroute;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoPath = 2;

// Flag values that override the config file only when actually passed.
struct CostFlags {
    std::optional<double> tau_c;
    std::optional<double> r_penalty;
    std::optional<double> rw;
    std::optional<std::int32_t> w_time;
    std::optional<double> d_thres;
    std::optional<double> v_max;

    void apply(CostParams& p) const {
        if (tau_c) p.tau_c = *tau_c;
        if (r_penalty) p.r_penalty = *r_penalty;
        if (rw) p.rw = *rw;
        if (w_time) p.w_time = *w_time;
        if (d_thres) p.d_thres = *d_thres;
        if (v_max) p.v_max = *v_max;
    }
};

void add_cost_flags(CLI::App* cmd, CostFlags& flags) {
    cmd->add_option("--tau-c", flags.tau_c, "Transition cost in seconds");
    cmd->add_option("--r-penalty", flags.r_penalty, "Road penalty factor");
    cmd->add_option("--rw", flags.rw, "Continuity reward exponent");
    cmd->add_option("--w-time", flags.w_time, "Temporal window in seconds");
    cmd->add_option("--d-thres", flags.d_thres, "Arrival threshold in meters");
    cmd->add_option("--v-max", flags.v_max, "Maximum area speed in m/s");
}

struct InputFlags {
    std::optional<std::string> trajectories;
    std::optional<std::string> roads;
    std::optional<std::string> snapshot;
    std::optional<double> cell_size;
};

void add_input_flags(CLI::App* cmd, InputFlags& flags, bool with_snapshot = true) {
    cmd->add_option("--trajectories", flags.trajectories, "Trajectory CSV path");
    cmd->add_option("--roads", flags.roads, "Road network GeoJSON path");
    if (with_snapshot) {
        cmd->add_option("--snapshot", flags.snapshot, "Index snapshot path");
    }
    cmd->add_option("--cell-size", flags.cell_size, "Grid cell size in meters");
}

Config make_config(const std::string& config_path, const InputFlags& in, const CostFlags& cost) {
    Config cfg;
    std::string path = config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("TRAJROUTE_CONFIG")) path = env;
    }
    if (!path.empty()) {
        apply_config_file(cfg, path);
    }
    if (in.trajectories) cfg.trajectories_path = *in.trajectories;
    if (in.roads) cfg.roads_path = *in.roads;
    if (in.snapshot) cfg.snapshot_path = *in.snapshot;
    if (in.cell_size) cfg.cell_size_m = *in.cell_size;
    cost.apply(cfg.cost);
    cfg.validate();
    return cfg;
}

// Loads data and builds the grid, from a snapshot when configured,
// otherwise from the raw inputs.
Snapshot load_inputs(const Config& cfg) {
    if (!cfg.snapshot_path.empty()) {
        return load_snapshot(cfg.snapshot_path);
    }
    if (cfg.trajectories_path.empty()) {
        throw Error("no input: set --snapshot or --trajectories/--roads");
    }
    Snapshot snap;
    snap.db = load_trajectories(cfg.trajectories_path);
    if (!cfg.roads_path.empty()) {
        RoadIngestOptions opts;
        opts.max_speed_mps = cfg.cost.v_max;
        snap.net = load_road_network(cfg.roads_path, opts);
    }
    const GeoBounds bounds = cfg.bbox ? *cfg.bbox : data_bounds(snap.db, snap.net);
    snap.grid = build_index(snap.db, snap.net, make_grid_spec(bounds, cfg.cell_size_m));
    return snap;
}

GeoPoint parse_latlon(const std::string& s, const char* what) {
    GeoPoint p;
    char extra;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &p.lat, &p.lon, &extra) != 2 || !valid_point(p)) {
        throw Error(std::string("bad ") + what + " '" + s + "', expected 'lat,lon'");
    }
    return p;
}

std::int64_t parse_depart(const std::string& s) {
    if (s.find_first_not_of("0123456789") == std::string::npos && !s.empty()) {
        return std::stoll(s);
    }
    int y, mo, d, h, mi, sec;
    if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &sec) == 6) {
        using namespace std::chrono;
        const sys_days day = year{y} / mo / d;
        return duration_cast<seconds>(day.time_since_epoch()).count() + h * 3600 + mi * 60 + sec;
    }
    throw Error("bad departure time '" + s + "', expected epoch seconds or ISO8601 UTC");
}

std::vector<double> parse_value_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) {
        throw Error("expected a comma-separated list of numbers, got '" + s + "'");
    }
    return out;
}

QuerySet make_queries(const Snapshot& snap, const Config& cfg,
                      const std::optional<std::string>& queries_path) {
    if (queries_path) {
        return load_queries_csv(*queries_path);
    }
    return generate_queries(snap.db, cfg.query_count, cfg.seed, cfg.cost.d_thres);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << content;
}

int run_index_build(const Config& cfg, const std::string& out_path, bool as_json) {
    const auto t0 = std::chrono::steady_clock::now();
    Config raw_cfg = cfg;
    raw_cfg.snapshot_path.clear();  // always build from raw inputs
    const Snapshot snap = load_inputs(raw_cfg);
    const auto t1 = std::chrono::steady_clock::now();
    const double build_s = std::chrono::duration<double>(t1 - t0).count();

    save_snapshot(out_path, snap.db, snap.net, snap.grid.spec());

    const double coverage = (!snap.db.empty() && !snap.net.empty())
                                ? spatial_coverage(snap.db, snap.net, snap.grid.spec())
                                : 0.0;
    const IndexStats& stats = snap.grid.stats();
    if (as_json) {
        nlohmann::ordered_json j;
        j["trajectories"] = snap.db.trajectories.size();
        j["trajectories_dropped"] = snap.db.dropped_count;
        j["trajectory_points"] = stats.traj_points;
        j["segments"] = snap.net.segments.size();
        j["road_points"] = stats.road_points;
        j["cells_used"] = stats.cells_used;
        j["coverage"] = coverage;
        j["build_seconds"] = build_s;
        j["snapshot"] = out_path;
        std::cout << j.dump() << "\n";
    } else {
        std::printf("indexed %zu trajectories (%zu dropped), %zu trajectory points\n",
                    snap.db.trajectories.size(), snap.db.dropped_count, stats.traj_points);
        std::printf("        %zu road segments, %zu road points\n", snap.net.segments.size(),
                    stats.road_points);
        std::printf("grid: %d x %d cells of %.1f m, %zu occupied\n", snap.grid.spec().cols,
                    snap.grid.spec().rows, snap.grid.spec().cell_size_m, stats.cells_used);
        std::printf("spatial coverage: %.3f\n", coverage);
        std::printf("built in %.3f s, snapshot written to %s\n", build_s, out_path.c_str());
    }
    return kExitOk;
}

int run_index_stats(const Config& cfg, bool as_json) {
    if (cfg.snapshot_path.empty()) {
        throw Error("index stats requires --snapshot");
    }
    const Snapshot snap = load_snapshot(cfg.snapshot_path);
    const IndexStats& stats = snap.grid.stats();
    const GridSpec& spec = snap.grid.spec();
    const double coverage = (!snap.db.empty() && !snap.net.empty())
                                ? spatial_coverage(snap.db, snap.net, spec)
                                : 0.0;
    if (as_json) {
        nlohmann::ordered_json j;
        j["origin"] = {{"lat", spec.origin.lat}, {"lon", spec.origin.lon}};
        j["cell_size_m"] = spec.cell_size_m;
        j["cols"] = spec.cols;
        j["rows"] = spec.rows;
        j["trajectories"] = snap.db.trajectories.size();
        j["trajectory_points"] = stats.traj_points;
        j["segments"] = snap.net.segments.size();
        j["road_points"] = stats.road_points;
        j["cells_used"] = stats.cells_used;
        j["coverage"] = coverage;
        std::cout << j.dump() << "\n";
    } else {
        std::printf("grid origin (%.6f, %.6f), %d x %d cells of %.1f m\n", spec.origin.lat,
                    spec.origin.lon, spec.cols, spec.rows, spec.cell_size_m);
        std::printf("%zu trajectories / %zu points, %zu segments / %zu points\n",
                    snap.db.trajectories.size(), stats.traj_points, snap.net.segments.size(),
                    stats.road_points);
        std::printf("%zu occupied cells, spatial coverage %.3f\n", stats.cells_used, coverage);
    }
    return kExitOk;
}

int run_route(const Config& cfg, const std::string& origin_s, const std::string& dest_s,
              const std::string& depart_s, bool explode_legs, bool adjacent_cells) {
    const Snapshot snap = load_inputs(cfg);
    Query q;
    q.origin = parse_latlon(origin_s, "origin");
    q.dest = parse_latlon(dest_s, "dest");
    q.depart_ts = parse_depart(depart_s);

    SearchOptions opts;
    opts.origin_adjacent_cells = adjacent_cells;
    try {
        const RouteResult route = find_path(snap.grid, snap.db, snap.net, q, cfg.cost, opts);
        std::cout << route_to_geojson(route, explode_legs) << "\n";
        return kExitOk;
    } catch (const NoPathError& e) {
        std::cerr << "no path: expanded " << e.expansions() << " nodes, nearest approach "
                  << e.nearest_approach_m() << " m\n";
        return kExitNoPath;
    }
}

int run_eval_gen_queries(const Config& cfg, const std::string& out_path) {
    const Snapshot snap = load_inputs(cfg);
    const QuerySet qs = generate_queries(snap.db, cfg.query_count, cfg.seed, cfg.cost.d_thres);
    std::ostringstream csv;
    write_queries_csv(qs, csv);
    write_file(out_path, csv.str());
    std::printf("wrote %zu queries to %s (seed %llu)\n", qs.queries.size(), out_path.c_str(),
                static_cast<unsigned long long>(qs.seed));
    return kExitOk;
}

int run_eval_sweep(const Config& cfg, const std::string& param_name, const std::string& values_s,
                   const std::optional<std::string>& queries_path,
                   const std::optional<std::string>& reference_path, const std::string& out_path,
                   std::size_t threads, bool no_timing) {
    const auto param = sweep_param_from_name(param_name);
    if (!param) {
        throw Error("unknown sweep parameter '" + param_name +
                    "'; valid names: r_penalty, rw, w_time");
    }
    const Snapshot snap = load_inputs(cfg);
    const QuerySet qs = make_queries(snap, cfg, queries_path);

    std::optional<ReferenceTable> reference;
    if (reference_path) {
        reference = load_reference(*reference_path, qs.queries.size());
    }

    SweepOptions opts;
    opts.threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
    opts.record_timing = !no_timing;

    const SweepReport report = run_sweep(snap.grid, snap.db, snap.net, qs, cfg.cost, *param,
                                         parse_value_list(values_s), reference, opts);
    std::ostringstream csv;
    write_sweep_csv(report, csv);
    write_file(out_path, csv.str());
    std::printf("swept %s over %zu values x %zu queries -> %s\n", report.parameter.c_str(),
                report.rows.size(), qs.queries.size(), out_path.c_str());
    return kExitOk;
}

int run_eval_coverage(const Config& cfg, const std::string& levels_s,
                      const std::optional<std::string>& queries_path,
                      const std::optional<std::string>& reference_path,
                      const std::string& out_path, std::size_t threads, bool no_timing) {
    Config raw_cfg = cfg;
    const Snapshot snap = load_inputs(raw_cfg);
    const QuerySet qs = make_queries(snap, cfg, queries_path);

    std::optional<ReferenceTable> reference;
    if (reference_path) {
        reference = load_reference(*reference_path, qs.queries.size());
    }

    SweepOptions opts;
    opts.threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
    opts.record_timing = !no_timing;

    const SweepReport report =
        coverage_ablation(snap.db, snap.net, snap.grid.spec(), parse_value_list(levels_s), qs,
                          cfg.cost, reference, opts);
    std::ostringstream csv;
    write_sweep_csv(report, csv);
    write_file(out_path, csv.str());
    std::printf("ran %zu coverage levels x %zu queries -> %s\n", report.rows.size(),
                qs.queries.size(), out_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Route planner over raw GPS trajectories with road-network fallback"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file (default: $TRAJROUTE_CONFIG when set)");

    // index build / index stats
    auto* index_cmd = app.add_subcommand("index", "Build or inspect the grid index");
    index_cmd->require_subcommand(1);

    auto* build_cmd = index_cmd->add_subcommand("build", "Build the index and write a snapshot");
    InputFlags build_in;
    CostFlags build_cost;
    std::string build_out = "index.trix";
    bool build_json = false;
    add_input_flags(build_cmd, build_in, /*with_snapshot=*/false);
    add_cost_flags(build_cmd, build_cost);
    build_cmd->add_option("--out", build_out, "Snapshot output path");
    build_cmd->add_flag("--json", build_json, "Print stats as JSON");

    auto* stats_cmd = index_cmd->add_subcommand("stats", "Print snapshot statistics");
    InputFlags stats_in;
    bool stats_json = false;
    stats_cmd->add_option("--snapshot", stats_in.snapshot, "Index snapshot path");
    stats_cmd->add_flag("--json", stats_json, "Print stats as JSON");

    // route
    auto* route_cmd = app.add_subcommand("route", "Compute a route and print GeoJSON");
    InputFlags route_in;
    CostFlags route_cost;
    std::string origin_s, dest_s, depart_s;
    bool explode_legs = false;
    bool adjacent_cells = false;
    add_input_flags(route_cmd, route_in);
    add_cost_flags(route_cmd, route_cost);
    route_cmd->add_option("--origin", origin_s, "Origin as lat,lon")->required();
    route_cmd->add_option("--dest", dest_s, "Destination as lat,lon")->required();
    route_cmd->add_option("--depart", depart_s, "Departure time (epoch seconds or ISO8601 UTC)")
        ->required();
    route_cmd->add_flag("--explode-legs", explode_legs, "Emit one feature per route leg");
    route_cmd->add_flag("--origin-adjacent-cells", adjacent_cells,
                        "Bootstrap from the 8 cells around the origin cell too");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluation harness");
    eval_cmd->require_subcommand(1);

    auto* gen_cmd = eval_cmd->add_subcommand("gen-queries", "Sample a reproducible query set");
    InputFlags gen_in;
    CostFlags gen_cost;
    std::optional<std::uint64_t> gen_seed;
    std::optional<std::size_t> gen_count;
    std::string gen_out = "queries.csv";
    add_input_flags(gen_cmd, gen_in);
    add_cost_flags(gen_cmd, gen_cost);
    gen_cmd->add_option("--seed", gen_seed, "Random seed");
    gen_cmd->add_option("--count", gen_count, "Number of queries");
    gen_cmd->add_option("--out", gen_out, "Output CSV path");

    auto* sweep_cmd = eval_cmd->add_subcommand("sweep", "Sweep one parameter over a query set");
    InputFlags sweep_in;
    CostFlags sweep_cost;
    std::string sweep_param, sweep_values;
    std::optional<std::string> sweep_queries, sweep_reference;
    std::string sweep_out = "sweep.csv";
    std::size_t sweep_threads = 0;
    bool sweep_no_timing = false;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<std::size_t> sweep_count;
    add_input_flags(sweep_cmd, sweep_in);
    add_cost_flags(sweep_cmd, sweep_cost);
    sweep_cmd->add_option("--param", sweep_param, "Parameter: r_penalty, rw, or w_time")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "Comma-separated parameter values")
        ->required();
    sweep_cmd->add_option("--queries", sweep_queries, "Query CSV (default: sample with --seed)");
    sweep_cmd->add_option("--reference", sweep_reference,
                          "Reference CSV (query_idx,ref_eta_s,ref_dist_m)");
    sweep_cmd->add_option("--out", sweep_out, "Output CSV path");
    sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0 = hardware)");
    sweep_cmd->add_flag("--no-timing", sweep_no_timing,
                        "Write avg_query_ms as 0 for reproducible output");
    sweep_cmd->add_option("--seed", sweep_seed, "Random seed for sampled queries");
    sweep_cmd->add_option("--count", sweep_count, "Number of sampled queries");

    auto* cov_cmd = eval_cmd->add_subcommand("coverage", "Coverage-level ablation");
    InputFlags cov_in;
    CostFlags cov_cost;
    std::string cov_levels = "0.05,0.25,0.5,0.75,1.0";
    std::optional<std::string> cov_queries, cov_reference;
    std::string cov_out = "coverage.csv";
    std::size_t cov_threads = 0;
    bool cov_no_timing = false;
    std::optional<std::uint64_t> cov_seed;
    std::optional<std::size_t> cov_count;
    add_input_flags(cov_cmd, cov_in);
    add_cost_flags(cov_cmd, cov_cost);
    cov_cmd->add_option("--levels", cov_levels, "Comma-separated coverage fractions");
    cov_cmd->add_option("--queries", cov_queries, "Query CSV (default: sample with --seed)");
    cov_cmd->add_option("--reference", cov_reference,
                        "Reference CSV (query_idx,ref_eta_s,ref_dist_m)");
    cov_cmd->add_option("--out", cov_out, "Output CSV path");
    cov_cmd->add_option("--threads", cov_threads, "Worker threads (0 = hardware)");
    cov_cmd->add_flag("--no-timing", cov_no_timing,
                      "Write avg_query_ms as 0 for reproducible output");
    cov_cmd->add_option("--seed", cov_seed, "Random seed for sampled queries");
    cov_cmd->add_option("--count", cov_count, "Number of sampled queries");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build_cmd->parsed()) {
            return run_index_build(make_config(config_path, build_in, build_cost), build_out,
                                   build_json);
        }
        if (stats_cmd->parsed()) {
            return run_index_stats(make_config(config_path, stats_in, CostFlags{}), stats_json);
        }
        if (route_cmd->parsed()) {
            return run_route(make_config(config_path, route_in, route_cost), origin_s, dest_s,
                             depart_s, explode_legs, adjacent_cells);
        }
        if (gen_cmd->parsed()) {
            Config cfg = make_config(config_path, gen_in, gen_cost);
            if (gen_seed) cfg.seed = *gen_seed;
            if (gen_count) cfg.query_count = *gen_count;
            return run_eval_gen_queries(cfg, gen_out);
        }
        if (sweep_cmd->parsed()) {
            Config cfg = make_config(config_path, sweep_in, sweep_cost);
            if (sweep_seed) cfg.seed = *sweep_seed;
            if (sweep_count) cfg.query_count = *sweep_count;
            return run_eval_sweep(cfg, sweep_param, sweep_values, sweep_queries, sweep_reference,
                                  sweep_out, sweep_threads, sweep_no_timing);
        }
        if (cov_cmd->parsed()) {
            Config cfg = make_config(config_path, cov_in, cov_cost);
            if (cov_seed) cfg.seed = *cov_seed;
            if (cov_count) cfg.query_count = *cov_count;
            return run_eval_coverage(cfg, cov_levels, cov_queries, cov_reference, cov_out,
                                     cov_threads, cov_no_timing);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
