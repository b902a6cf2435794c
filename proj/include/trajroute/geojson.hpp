#pragma once

#include <string>

#include "trajroute/search.hpp"

namespace trajroute {

// GeoJSON FeatureCollection for a route: one LineString feature (or a
// Point for single-point routes) with eta_s, distance_m, and leg
// provenance; optionally one extra feature per leg.
std::string route_to_geojson(const RouteResult& route, bool explode_legs = false);

}  // namespace trajroute
