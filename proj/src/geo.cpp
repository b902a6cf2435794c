#include "trajroute/geo.hpp"

#include <chrono>
#include <cmath>

namespace trajroute {

namespace {
constexpr double kPi = 3.14159265358979323846;
inline double to_rad(double deg) { return deg * kPi / 180.0; }
}  // namespace

bool valid_point(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) &&
           p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    if (a == b) {
        return 0.0;
    }
    const double lat1 = to_rad(a.lat);
    const double lat2 = to_rad(b.lat);
    const double dlat = to_rad(b.lat - a.lat);
    const double dlon = to_rad(b.lon - a.lon);

    const double sl = std::sin(dlat / 2.0);
    const double so = std::sin(dlon / 2.0);
    double h = sl * sl + std::cos(lat1) * std::cos(lat2) * so * so;
    if (h > 1.0) h = 1.0;
    return kEarthRadiusM * 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

double path_length_m(const std::vector<GeoPoint>& path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        total += haversine_m(path[i - 1], path[i]);
    }
    return total;
}

LocalOffset local_offset_m(const GeoPoint& origin, const GeoPoint& p) {
    LocalOffset off;
    off.east_m = (p.lon - origin.lon) * std::cos(to_rad(origin.lat)) * kMetersPerDegree;
    off.north_m = (p.lat - origin.lat) * kMetersPerDegree;
    return off;
}

CellId cell_of(const GeoPoint& p, const GridSpec& spec) {
    const LocalOffset off = local_offset_m(spec.origin, p);
    const double col = std::floor(off.east_m / spec.cell_size_m);
    const double row = std::floor(off.north_m / spec.cell_size_m);
    if (col < 0 || row < 0 || col >= spec.cols || row >= spec.rows) {
        throw OutOfBounds("point (" + std::to_string(p.lat) + ", " + std::to_string(p.lon) +
                          ") outside grid bounding box");
    }
    return CellId{static_cast<std::int32_t>(col), static_cast<std::int32_t>(row)};
}

bool in_bounds(const GeoPoint& p, const GridSpec& spec) {
    const LocalOffset off = local_offset_m(spec.origin, p);
    return off.east_m >= 0.0 && off.north_m >= 0.0 &&
           off.east_m < spec.cols * spec.cell_size_m &&
           off.north_m < spec.rows * spec.cell_size_m;
}

DayClass day_class(std::int64_t ts) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{ts}};
    const weekday wd{floor<days>(tp)};
    return (wd == Saturday || wd == Sunday) ? DayClass::Weekend : DayClass::Weekday;
}

}  // namespace trajroute
