#include "trajroute/snapshot.hpp"

#include <cstring>
#include <fstream>

namespace trajroute {

namespace {

constexpr char kMagic[8] = {'T', 'R', 'I', 'X', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) {
        throw ParseError("truncated snapshot", 0);
    }
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    const auto len = read_pod<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) {
        throw ParseError("truncated snapshot", 0);
    }
    return s;
}

}  // namespace

void save_snapshot(const std::string& path, const TrajectoryDB& db, const RoadNetwork& net,
                   const GridSpec& spec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);

    write_pod(out, spec.origin.lat);
    write_pod(out, spec.origin.lon);
    write_pod(out, spec.cell_size_m);
    write_pod(out, spec.cols);
    write_pod(out, spec.rows);

    write_pod<std::uint64_t>(out, db.dropped_count);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(db.trajectories.size()));
    for (const auto& t : db.trajectories) {
        write_string(out, t.id);
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(t.points.size()));
        for (const auto& p : t.points) {
            write_pod(out, p.pos.lat);
            write_pod(out, p.pos.lon);
            write_pod(out, p.ts);
        }
    }

    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(net.segments.size()));
    for (const auto& s : net.segments) {
        write_string(out, s.id);
        write_pod(out, s.speed_limit_mps);
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.points.size()));
        for (const auto& p : s.points) {
            write_pod(out, p.lat);
            write_pod(out, p.lon);
        }
    }
    if (!out) {
        throw Error("write failed for " + path);
    }
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ParseError(path + ": not a snapshot file", 0);
    }
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion) {
        throw ParseError(path + ": unsupported snapshot version " + std::to_string(version), 0);
    }

    Snapshot snap;
    GridSpec spec;
    spec.origin.lat = read_pod<double>(in);
    spec.origin.lon = read_pod<double>(in);
    spec.cell_size_m = read_pod<double>(in);
    spec.cols = read_pod<std::int32_t>(in);
    spec.rows = read_pod<std::int32_t>(in);

    snap.db.dropped_count = read_pod<std::uint64_t>(in);
    const auto traj_count = read_pod<std::uint32_t>(in);
    snap.db.trajectories.reserve(traj_count);
    for (std::uint32_t i = 0; i < traj_count; ++i) {
        Trajectory t;
        t.id = read_string(in);
        const auto point_count = read_pod<std::uint32_t>(in);
        t.points.reserve(point_count);
        for (std::uint32_t j = 0; j < point_count; ++j) {
            TrajectoryPoint p;
            p.pos.lat = read_pod<double>(in);
            p.pos.lon = read_pod<double>(in);
            p.ts = read_pod<std::int64_t>(in);
            t.points.push_back(p);
        }
        snap.db.trajectories.push_back(std::move(t));
    }

    const auto seg_count = read_pod<std::uint32_t>(in);
    snap.net.segments.reserve(seg_count);
    for (std::uint32_t i = 0; i < seg_count; ++i) {
        RoadSegment s;
        s.id = read_string(in);
        s.speed_limit_mps = read_pod<double>(in);
        const auto point_count = read_pod<std::uint32_t>(in);
        s.points.reserve(point_count);
        for (std::uint32_t j = 0; j < point_count; ++j) {
            GeoPoint p;
            p.lat = read_pod<double>(in);
            p.lon = read_pod<double>(in);
            s.points.push_back(p);
        }
        snap.net.segments.push_back(std::move(s));
    }

    snap.grid = build_index(snap.db, snap.net, spec);
    return snap;
}

}  // namespace trajroute
