#include "trajroute/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace trajroute {

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return in;
}

double parse_double(std::string_view field, std::size_t line, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(std::string("bad ") + what + " value '" + std::string(field) + "'", line);
    }
    return v;
}

std::int64_t parse_int(std::string_view field, std::size_t line, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(std::string("bad ") + what + " value '" + std::string(field) + "'", line);
    }
    return v;
}

// Cell key usable before a full GridIndex exists.
std::uint64_t cell_key(const CellId& c) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.row)) << 32) |
           static_cast<std::uint32_t>(c.col);
}

// Cells occupied by any trajectory point.
std::unordered_set<std::uint64_t> trajectory_cells(const TrajectoryDB& db, const GridSpec& spec) {
    std::unordered_set<std::uint64_t> cells;
    for (const auto& t : db.trajectories) {
        for (const auto& pt : t.points) {
            cells.insert(cell_key(cell_of(pt.pos, spec)));
        }
    }
    return cells;
}

bool segment_covered(const RoadSegment& seg, const GridSpec& spec,
                     const std::unordered_set<std::uint64_t>& traj_cells) {
    for (const auto& p : seg.points) {
        if (traj_cells.count(cell_key(cell_of(p, spec)))) {
            return true;
        }
    }
    return false;
}

}  // namespace

TrajectoryDB load_trajectories(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    return load_trajectories(in, path);
}

TrajectoryDB load_trajectories(std::istream& in, const std::string& name) {
    std::string header;
    if (!std::getline(in, header)) {
        throw ParseError(name + ": missing header", 1);
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "traj_id,lat,lon,ts") {
        throw ParseError(name + ": expected header 'traj_id,lat,lon,ts', got '" + header + "'", 1);
    }

    // Group rows by id, keeping first-appearance order of ids.
    std::vector<Trajectory> groups;
    std::unordered_map<std::string, std::size_t> by_id;

    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::string_view row(line);
        std::array<std::string_view, 4> fields;
        std::size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            const std::size_t comma = row.find(',', start);
            if (f < 3) {
                if (comma == std::string_view::npos) {
                    throw ParseError("expected 4 comma-separated fields", lineno);
                }
                fields[f] = row.substr(start, comma - start);
                start = comma + 1;
            } else {
                if (comma != std::string_view::npos) {
                    throw ParseError("expected 4 comma-separated fields", lineno);
                }
                fields[f] = row.substr(start);
            }
        }

        TrajectoryPoint pt;
        pt.pos.lat = parse_double(fields[1], lineno, "lat");
        pt.pos.lon = parse_double(fields[2], lineno, "lon");
        pt.ts = parse_int(fields[3], lineno, "ts");
        if (!valid_point(pt.pos)) {
            throw ParseError("coordinates out of range", lineno);
        }
        if (pt.ts < 0) {
            throw ParseError("negative timestamp", lineno);
        }

        const std::string id(fields[0]);
        auto [it, inserted] = by_id.try_emplace(id, groups.size());
        if (inserted) {
            groups.push_back(Trajectory{id, {}});
        }
        groups[it->second].points.push_back(pt);
    }

    TrajectoryDB db;
    for (auto& t : groups) {
        std::stable_sort(t.points.begin(), t.points.end(),
                         [](const TrajectoryPoint& a, const TrajectoryPoint& b) { return a.ts < b.ts; });
        if (t.points.size() < 2 || t.length_m() < kMinTrajectoryLengthM ||
            t.duration_s() < kMinTrajectoryDurationS) {
            ++db.dropped_count;
            continue;
        }
        db.trajectories.push_back(std::move(t));
    }
    if (db.trajectories.empty()) {
        throw EmptyDataset(name + ": no trajectory survives the 500 m / 120 s filter");
    }
    return db;
}

RoadNetwork load_road_network(const std::string& path, const RoadIngestOptions& opts) {
    std::ifstream in = open_or_throw(path);
    return load_road_network(in, opts, path);
}

RoadNetwork load_road_network(std::istream& in, const RoadIngestOptions& opts,
                              const std::string& name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(name + ": invalid JSON: " + e.what(), 0);
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array()) {
        throw ParseError(name + ": expected a GeoJSON FeatureCollection", 0);
    }

    RoadNetwork net;
    std::unordered_set<std::string> seen_ids;
    std::size_t feature_no = 0;
    for (const auto& feature : doc["features"]) {
        ++feature_no;
        const auto& geom = feature.at("geometry");
        if (geom.value("type", "") != "LineString") {
            throw InvalidGeometry(name + ": feature " + std::to_string(feature_no) +
                                  " is not a LineString");
        }

        RoadSegment seg;
        if (feature.contains("properties") && feature["properties"].is_object()) {
            const auto& props = feature["properties"];
            if (props.contains("id")) seg.id = props["id"].get<std::string>();
            if (props.contains("speed_mps")) {
                seg.speed_limit_mps = props["speed_mps"].get<double>();
            } else {
                seg.speed_limit_mps = opts.default_speed_mps;
            }
        } else {
            seg.speed_limit_mps = opts.default_speed_mps;
        }
        if (seg.id.empty()) seg.id = "segment-" + std::to_string(feature_no);
        if (seg.speed_limit_mps <= 0.0) {
            throw InvalidGeometry(name + ": feature '" + seg.id + "' has non-positive speed");
        }
        seg.speed_limit_mps = std::min(seg.speed_limit_mps, opts.max_speed_mps);

        for (const auto& coord : geom.at("coordinates")) {
            // GeoJSON positions are [lon, lat].
            GeoPoint p{coord.at(1).get<double>(), coord.at(0).get<double>()};
            if (!valid_point(p)) {
                throw InvalidGeometry(name + ": feature '" + seg.id + "' has invalid coordinates");
            }
            seg.points.push_back(p);
        }
        if (seg.points.size() < 2) {
            throw InvalidGeometry(name + ": feature '" + seg.id + "' has fewer than 2 points");
        }
        for (std::size_t i = 1; i < seg.points.size(); ++i) {
            if (seg.points[i] == seg.points[i - 1]) {
                throw InvalidGeometry(name + ": feature '" + seg.id +
                                      "' repeats consecutive points");
            }
        }
        if (!seen_ids.insert(seg.id).second) {
            throw ParseError(name + ": duplicate segment id '" + seg.id + "'", 0);
        }
        net.segments.push_back(std::move(seg));
    }
    return net;
}

double spatial_coverage(const TrajectoryDB& db, const RoadNetwork& net, const GridSpec& spec) {
    if (db.empty() || net.empty()) {
        throw EmptyDataset("spatial_coverage requires non-empty datasets");
    }
    const auto traj_cells = trajectory_cells(db, spec);
    std::size_t covered = 0;
    for (const auto& seg : net.segments) {
        if (segment_covered(seg, spec, traj_cells)) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(net.segments.size());
}

TrajectoryDB coverage_subset(const TrajectoryDB& db, const RoadNetwork& net,
                             const GridSpec& spec, double target) {
    if (target <= 0.0 || target > 1.0) {
        throw Error("coverage target must be in (0, 1]");
    }
    if (db.empty() || net.empty()) {
        throw EmptyDataset("coverage_subset requires non-empty datasets");
    }

    // cell -> indices of segments touching it
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> segments_by_cell;
    for (std::uint32_t si = 0; si < net.segments.size(); ++si) {
        for (const auto& p : net.segments[si].points) {
            segments_by_cell[cell_key(cell_of(p, spec))].push_back(si);
        }
    }

    std::vector<bool> covered(net.segments.size(), false);
    std::size_t covered_count = 0;
    const double total = static_cast<double>(net.segments.size());

    auto touched_segments = [&](const Trajectory& t) {
        std::vector<std::uint32_t> out;
        std::unordered_set<std::uint64_t> cells;
        for (const auto& pt : t.points) {
            cells.insert(cell_key(cell_of(pt.pos, spec)));
        }
        for (const auto c : cells) {
            const auto it = segments_by_cell.find(c);
            if (it == segments_by_cell.end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        return out;
    };

    TrajectoryDB subset;
    subset.dropped_count = db.dropped_count;
    std::size_t prefix_end = db.trajectories.size();
    for (std::size_t i = 0; i < db.trajectories.size(); ++i) {
        const auto& t = db.trajectories[i];
        for (const auto si : touched_segments(t)) {
            if (!covered[si]) {
                covered[si] = true;
                ++covered_count;
            }
        }
        subset.trajectories.push_back(t);
        if (static_cast<double>(covered_count) / total >= target) {
            prefix_end = i + 1;
            break;
        }
    }
    if (static_cast<double>(covered_count) / total < target) {
        throw Unreachable("coverage target " + std::to_string(target) +
                          " exceeds full-dataset coverage " +
                          std::to_string(covered_count / total));
    }

    // Keep later trajectories that only overlap already-covered segments.
    for (std::size_t i = prefix_end; i < db.trajectories.size(); ++i) {
        const auto& t = db.trajectories[i];
        bool adds_new = false;
        for (const auto si : touched_segments(t)) {
            if (!covered[si]) {
                adds_new = true;
                break;
            }
        }
        if (!adds_new) {
            subset.trajectories.push_back(t);
        }
    }
    return subset;
}

}  // namespace trajroute
