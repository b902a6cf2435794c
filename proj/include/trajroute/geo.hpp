#pragma once

#include <cstdint>
#include <vector>

#include "trajroute/errors.hpp"

namespace trajroute {

// WGS84 coordinate in degrees.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    bool operator==(const GeoPoint& o) const { return lat == o.lat && lon == o.lon; }
    bool operator!=(const GeoPoint& o) const { return !(*this == o); }
};

bool valid_point(const GeoPoint& p);

// Mean Earth radius used by the haversine formula.
inline constexpr double kEarthRadiusM = 6'371'000.0;

// Meters per degree of latitude for the local equirectangular projection.
inline constexpr double kMetersPerDegree = 111'320.0;

// Great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

// Total haversine length of a polyline.
double path_length_m(const std::vector<GeoPoint>& path);

// Uniform grid over the area of interest. `origin` is the south-west
// corner; cells are half-open squares of `cell_size_m` meters side.
struct GridSpec {
    GeoPoint origin;
    double cell_size_m = 100.0;
    std::int32_t cols = 1;
    std::int32_t rows = 1;
};

struct CellId {
    std::int32_t col = 0;
    std::int32_t row = 0;

    bool operator==(const CellId& o) const { return col == o.col && row == o.row; }
    bool operator!=(const CellId& o) const { return !(*this == o); }
};

// East/north offsets of `p` from `origin` in meters, using a local
// equirectangular projection anchored at `origin`.
struct LocalOffset {
    double east_m = 0.0;
    double north_m = 0.0;
};
LocalOffset local_offset_m(const GeoPoint& origin, const GeoPoint& p);

// Grid cell containing `p`. Cells are half-open: a point exactly on a
// cell's east/north boundary belongs to the higher-index cell.
// Throws OutOfBounds when `p` falls outside the grid.
CellId cell_of(const GeoPoint& p, const GridSpec& spec);

bool in_bounds(const GeoPoint& p, const GridSpec& spec);

enum class DayClass : std::uint8_t { Weekday = 0, Weekend = 1 };

// Weekday/weekend classification of the UTC calendar day of `ts`.
DayClass day_class(std::int64_t ts);

inline constexpr std::int32_t kSecondsPerDay = 86'400;

// Seconds since UTC midnight.
inline std::int32_t time_of_day_s(std::int64_t ts) {
    return static_cast<std::int32_t>(ts % kSecondsPerDay);
}

}  // namespace trajroute
