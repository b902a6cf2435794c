#pragma once

#include <string>

#include "trajroute/index.hpp"

namespace trajroute {

// Everything a routing session needs: the stores and the grid built
// over them.
struct Snapshot {
    TrajectoryDB db;
    RoadNetwork net;
    GridIndex grid;
};

// Binary snapshot with a magic header and format version. The grid spec
// and both stores are written verbatim; cells are rebuilt on load, which
// reproduces an identical index because construction is deterministic.
void save_snapshot(const std::string& path, const TrajectoryDB& db, const RoadNetwork& net,
                   const GridSpec& spec);

Snapshot load_snapshot(const std::string& path);

}  // namespace trajroute
