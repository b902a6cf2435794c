#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace trajroute::testing {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

GeoPoint offset_point(const GeoPoint& anchor, double east_m, double north_m) {
    GeoPoint p;
    p.lat = anchor.lat + north_m / kMetersPerDegree;
    p.lon = anchor.lon + east_m / (kMetersPerDegree * std::cos(anchor.lat * kPi / 180.0));
    return p;
}

Trajectory make_traj(std::string id, const std::vector<std::pair<LocalOffset, std::int64_t>>& pts,
                     const GeoPoint& anchor) {
    Trajectory t;
    t.id = std::move(id);
    for (const auto& [off, ts] : pts) {
        t.points.push_back(TrajectoryPoint{offset_point(anchor, off.east_m, off.north_m), ts});
    }
    return t;
}

RoadSegment make_seg(std::string id, const std::vector<LocalOffset>& pts, double speed,
                     const GeoPoint& anchor) {
    RoadSegment s;
    s.id = std::move(id);
    s.speed_limit_mps = speed;
    for (const auto& off : pts) {
        s.points.push_back(offset_point(anchor, off.east_m, off.north_m));
    }
    return s;
}

namespace {

const GeoPoint kAnchor{37.0, -122.0};

GridSpec spec_for(const TrajectoryDB& db, const RoadNetwork& net, double cell_size_m = 100.0) {
    return make_grid_spec(data_bounds(db, net), cell_size_m);
}

// Grid anchored at the fixture anchor itself, so hand-placed offsets
// land well inside their intended cells.
GridSpec corridor_spec(double east_extent_m, double north_extent_m) {
    GridSpec spec;
    spec.origin = kAnchor;
    spec.cell_size_m = 100.0;
    spec.cols = static_cast<std::int32_t>(east_extent_m / 100.0) + 2;
    spec.rows = static_cast<std::int32_t>(north_extent_m / 100.0) + 2;
    return spec;
}

// Evenly spaced points along west->east at the given northing.
std::vector<LocalOffset> line_east(double x0, double x1, double step, double y) {
    std::vector<LocalOffset> pts;
    for (double x = x0; x <= x1 + 1e-6; x += step) {
        pts.push_back(LocalOffset{x, y});
    }
    return pts;
}

Trajectory traj_along(std::string id, const std::vector<LocalOffset>& line, std::int64_t start_ts,
                      std::int64_t step_s) {
    std::vector<std::pair<LocalOffset, std::int64_t>> pts;
    std::int64_t ts = start_ts;
    for (const auto& off : line) {
        pts.push_back({off, ts});
        ts += step_s;
    }
    return make_traj(std::move(id), pts, kAnchor);
}

}  // namespace

Fixture flip_fixture() {
    Fixture f;
    const auto line = line_east(10, 1010, 100, 50);  // 11 points, 1 km

    f.net.segments.push_back(make_seg("r0", line, 20.0, kAnchor));      // 5 s per leg
    f.db.trajectories.push_back(traj_along("t0", line, kMonday + 8 * 3600, 12));  // 12 s per leg

    f.spec = corridor_spec(1100, 100);
    f.params.d_thres = 100.0;
    f.queries.push_back(Query{offset_point(kAnchor, 10, 50), offset_point(kAnchor, 1010, 50),
                              kMonday + 8 * 3600});
    return f;
}

Fixture full_coverage_fixture() {
    Fixture f;
    f.net.segments.push_back(make_seg("r0", line_east(10, 510, 125, 50), 10.0, kAnchor));
    f.net.segments.push_back(make_seg("r1", line_east(510, 1010, 125, 50), 10.0, kAnchor));
    f.net.segments.push_back(make_seg("r2", line_east(1010, 1510, 125, 50), 10.0, kAnchor));

    // Recorded mid-afternoon; queries depart at 08:00.
    f.db.trajectories.push_back(
        traj_along("cover", line_east(10, 1510, 125, 50), kMonday + 14 * 3600, 16));

    f.spec = corridor_spec(1600, 100);
    f.params.r_penalty = 3.0;
    f.params.d_thres = 100.0;

    const std::int64_t depart = kMonday + 8 * 3600;
    f.queries.push_back(
        Query{offset_point(kAnchor, 10, 50), offset_point(kAnchor, 1385, 50), depart});
    f.queries.push_back(
        Query{offset_point(kAnchor, 135, 50), offset_point(kAnchor, 1510, 50), depart + 60});
    f.queries.push_back(
        Query{offset_point(kAnchor, 260, 50), offset_point(kAnchor, 1260, 50), depart + 120});
    return f;
}

Fixture disjoint_halves_fixture() {
    Fixture f;
    f.net.segments.push_back(make_seg("r0", line_east(10, 510, 125, 50), 10.0, kAnchor));
    f.net.segments.push_back(make_seg("r1", line_east(510, 1010, 125, 50), 10.0, kAnchor));
    f.net.segments.push_back(make_seg("r2", line_east(1010, 1510, 125, 50), 10.0, kAnchor));
    f.net.segments.push_back(make_seg("r3", line_east(1510, 2010, 125, 50), 10.0, kAnchor));

    // West trajectories first in DB order. w0 ends with a sparse hop to
    // x=1450, a cell no road point occupies, where e0 starts.
    auto west_line = line_east(10, 885, 125, 50);
    west_line.push_back(LocalOffset{950, 50});
    west_line.push_back(LocalOffset{1450, 50});
    std::vector<std::pair<LocalOffset, std::int64_t>> w0_pts;
    std::int64_t ts = kMonday + 8 * 3600;
    for (std::size_t i = 0; i < west_line.size(); ++i) {
        w0_pts.push_back({west_line[i], ts});
        ts += (i == west_line.size() - 2) ? 63 : 16;  // last leg is the 500 m hop
    }
    f.db.trajectories.push_back(make_traj("w0", w0_pts, kAnchor));

    f.db.trajectories.push_back(traj_along("w1", line_east(30, 905, 125, 70),
                                           kMonday + 8 * 3600 + 300, 18));

    std::vector<LocalOffset> east_line{LocalOffset{1450, 50}};
    for (double x = 1510; x <= 2010 + 1e-6; x += 125) east_line.push_back(LocalOffset{x, 50});
    f.db.trajectories.push_back(traj_along("e0", east_line, kMonday + 8 * 3600 + 120, 30));

    f.spec = corridor_spec(2100, 100);
    f.params.r_penalty = 3.0;
    f.params.d_thres = 100.0;

    const std::int64_t depart = kMonday + 8 * 3600;
    f.queries.push_back(
        Query{offset_point(kAnchor, 10, 50), offset_point(kAnchor, 1885, 50), depart});
    f.queries.push_back(
        Query{offset_point(kAnchor, 135, 50), offset_point(kAnchor, 1760, 50), depart + 60});
    return f;
}

double disjoint_halves_west_coverage() { return 0.5; }

Fixture hop_fixture() {
    Fixture f;
    f.db.trajectories.push_back(traj_along("t_a", line_east(10, 635, 125, 50),
                                           kMonday + 8 * 3600, 35));
    f.db.trajectories.push_back(traj_along("t_b", line_east(635, 1260, 125, 70),
                                           kMonday + 8 * 3600 + 60, 35));
    f.spec = corridor_spec(1400, 100);
    f.params.d_thres = 50.0;
    f.queries.push_back(Query{offset_point(kAnchor, 10, 50), offset_point(kAnchor, 1260, 70),
                              kMonday + 8 * 3600});
    return f;
}

namespace {

struct Walk {
    std::vector<LocalOffset> points;
    std::vector<std::int64_t> hold_s;  // seconds spent on leg i -> i+1
};

// Random walk with a minimum step length; optionally steered through a
// hub so independent walks share cells.
Walk random_walk(Rng& rng, std::size_t steps, double area_m, double min_step, double max_step,
                 double lo_speed, double hi_speed, const LocalOffset* hub) {
    Walk w;
    LocalOffset pos{rng.uniform(area_m * 0.1, area_m * 0.9),
                    rng.uniform(area_m * 0.1, area_m * 0.9)};
    double heading = rng.uniform(0, 2 * kPi);
    bool hub_mode = hub != nullptr;
    w.points.push_back(pos);
    for (std::size_t i = 0; i < steps; ++i) {
        const double len = rng.uniform(min_step, max_step);
        if (hub_mode) {
            const double dx = hub->east_m - pos.east_m;
            const double dy = hub->north_m - pos.north_m;
            if (std::hypot(dx, dy) < 250.0) {
                hub_mode = false;
            } else {
                heading = std::atan2(dy, dx) + rng.uniform(-0.5, 0.5);
            }
        } else {
            heading += rng.uniform(-0.7, 0.7);
        }
        LocalOffset next{pos.east_m + len * std::cos(heading),
                         pos.north_m + len * std::sin(heading)};
        if (next.east_m < 50 || next.east_m > area_m - 50 || next.north_m < 50 ||
            next.north_m > area_m - 50) {
            heading = std::atan2(area_m / 2 - pos.north_m, area_m / 2 - pos.east_m) +
                      rng.uniform(-0.3, 0.3);
            next = LocalOffset{pos.east_m + len * std::cos(heading),
                               pos.north_m + len * std::sin(heading)};
        }
        const double speed = rng.uniform(lo_speed, hi_speed);
        w.hold_s.push_back(std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                                         std::ceil(len / speed))));
        w.points.push_back(next);
        pos = next;
    }
    return w;
}

}  // namespace

Fixture random_fixture(Rng& rng, const RandomFixtureOptions& opts) {
    Fixture f;
    const double area = 3000.0;
    const GeoPoint anchor{37.0 + rng.uniform(-0.01, 0.01), -122.0 + rng.uniform(-0.01, 0.01)};

    LocalOffset hubs[3];
    for (auto& h : hubs) {
        h = LocalOffset{rng.uniform(400, area - 400), rng.uniform(400, area - 400)};
    }

    const std::size_t ntraj =
        opts.min_trajectories + rng.below(opts.max_trajectories - opts.min_trajectories + 1);
    for (std::size_t i = 0; i < ntraj; ++i) {
        const LocalOffset* hub = rng.unit() < 0.6 ? &hubs[rng.below(3)] : nullptr;
        const std::size_t steps = 10 + rng.below(14);
        // Speeds stay <= 10 m/s so recorded legs dominate the
        // straight-line bound at v_max = 31.29.
        const Walk w = random_walk(rng, steps, area, 150, 400, 4, 10, hub);
        std::vector<std::pair<LocalOffset, std::int64_t>> pts;
        std::int64_t ts = kMonday + 8 * 3600 + static_cast<std::int64_t>(rng.below(1201)) - 600;
        for (std::size_t j = 0; j < w.points.size(); ++j) {
            pts.push_back({w.points[j], ts});
            if (j < w.hold_s.size()) ts += w.hold_s[j];
        }
        f.db.trajectories.push_back(make_traj("t" + std::to_string(i), pts, anchor));
    }

    const std::size_t nroads = 3 + rng.below(4);
    for (std::size_t i = 0; i < nroads; ++i) {
        const LocalOffset* hub = rng.unit() < 0.5 ? &hubs[rng.below(3)] : nullptr;
        const Walk w = random_walk(rng, 5 + rng.below(6), area, 150, 400, 5, 10, hub);
        f.net.segments.push_back(
            make_seg("r" + std::to_string(i), w.points, rng.uniform(5, 10), anchor));
    }

    f.spec = spec_for(f.db, f.net);
    f.params.tau_c = opts.tau_c;
    f.params.r_penalty = opts.r_penalty;
    f.params.rw = 0.0;

    // Origin: a sampled trajectory point; its timestamp is the departure
    // time, so the origin cell always holds an in-window entry.
    const auto& t_or = f.db.trajectories[rng.below(f.db.trajectories.size())];
    const std::size_t oi = rng.below(t_or.points.size());
    Query q;
    q.origin = t_or.points[oi].pos;
    q.depart_ts = t_or.points[oi].ts;

    // Destination: a trajectory point with no other indexed point nearby,
    // so the within-d_thres goal set is that single point.
    for (int attempt = 0; attempt < 60; ++attempt) {
        const std::uint32_t tb = static_cast<std::uint32_t>(rng.below(f.db.trajectories.size()));
        const auto& t_de = f.db.trajectories[tb];
        const std::uint32_t di = static_cast<std::uint32_t>(rng.below(t_de.points.size()));
        const GeoPoint dest = t_de.points[di].pos;
        if (haversine_m(q.origin, dest) < 800.0) continue;

        double second_nearest = 1e18;
        for (std::uint32_t ti = 0; ti < f.db.trajectories.size(); ++ti) {
            const auto& t = f.db.trajectories[ti];
            for (std::uint32_t pi = 0; pi < t.points.size(); ++pi) {
                if (ti == tb && pi == di) continue;
                second_nearest = std::min(second_nearest, haversine_m(t.points[pi].pos, dest));
            }
        }
        for (const auto& seg : f.net.segments) {
            for (const auto& p : seg.points) {
                second_nearest = std::min(second_nearest, haversine_m(p, dest));
            }
        }
        if (second_nearest < 8.0) continue;

        q.dest = dest;
        f.params.d_thres = std::min(60.0, 0.45 * second_nearest);
        break;
    }
    if (q.dest == GeoPoint{}) {
        // Extremely unlikely; fall back to the farthest point of another walk.
        q.dest = f.db.trajectories.back().points.back().pos;
        f.params.d_thres = 10.0;
    }
    f.queries.push_back(q);
    return f;
}

double recompute_eta(const RouteResult& route, const TrajectoryDB& db, const RoadNetwork& net,
                     const CostParams& params) {
    double eta = 0.0;
    for (const auto& leg : route.legs) {
        auto step = [&](std::uint32_t i) {
            if (leg.kind == SourceKind::Trajectory) {
                const auto& pts = db.trajectories[leg.item].points;
                return static_cast<double>(pts[i + 1].ts - pts[i].ts);
            }
            const auto& seg = net.segments[leg.item];
            return haversine_m(seg.points[i], seg.points[i + 1]) / seg.speed_limit_mps;
        };
        std::uint32_t i = leg.from_idx;
        if (leg.entered_by_switch) {
            // The switch edge charges tau_c plus its first step as one
            // movement cost; keep the same floating-point association.
            eta += params.tau_c + step(i);
            ++i;
        }
        for (; i < leg.to_idx; ++i) {
            eta += step(i);
        }
    }
    return eta;
}

Fixture perf_fixture(std::size_t trajectory_count, std::size_t points_per_trajectory,
                     std::uint64_t seed) {
    Fixture f;
    Rng rng(seed);
    const double area = 8000.0;

    for (std::size_t i = 0; i < trajectory_count; ++i) {
        const Walk w =
            random_walk(rng, points_per_trajectory - 1, area, 40, 120, 3, 15, nullptr);
        std::vector<std::pair<LocalOffset, std::int64_t>> pts;
        std::int64_t ts = kMonday + static_cast<std::int64_t>(rng.below(86'000));
        for (std::size_t j = 0; j < w.points.size(); ++j) {
            pts.push_back({w.points[j], ts});
            if (j < w.hold_s.size()) ts += w.hold_s[j];
        }
        f.db.trajectories.push_back(make_traj("t" + std::to_string(i), pts, kAnchor));
    }

    // Street grid every 320 m.
    int sid = 0;
    for (double y = 40; y < area; y += 320) {
        f.net.segments.push_back(
            make_seg("h" + std::to_string(sid++), line_east(40, area - 40, 200, y), 13.4,
                     kAnchor));
    }
    for (double x = 40; x < area; x += 320) {
        std::vector<LocalOffset> pts;
        for (double y = 40; y <= area - 40 + 1e-6; y += 200) pts.push_back(LocalOffset{x, y});
        f.net.segments.push_back(make_seg("v" + std::to_string(sid++), pts, 13.4, kAnchor));
    }

    f.spec = spec_for(f.db, f.net);
    return f;
}

}  // namespace trajroute::testing
