#include <doctest.h>

#include <cmath>

#include "trajroute/geo.hpp"
#include "trajroute/rng.hpp"
#include "support/fixtures.hpp"

using namespace trajroute;

namespace {

// Independent great-circle oracle: spherical law of cosines.
double law_of_cosines_m(const GeoPoint& a, const GeoPoint& b) {
    const double d = 3.14159265358979323846 / 180.0;
    double cosang = std::sin(a.lat * d) * std::sin(b.lat * d) +
                    std::cos(a.lat * d) * std::cos(b.lat * d) * std::cos((b.lon - a.lon) * d);
    cosang = std::min(1.0, std::max(-1.0, cosang));
    return kEarthRadiusM * std::acos(cosang);
}

}  // namespace

TEST_CASE("haversine identity and known distances") {
    const GeoPoint p{37.0, -122.0};
    CHECK(haversine_m(p, p) == 0.0);

    // One degree of longitude on the equator and one degree of latitude
    // along a meridian subtend the same central angle.
    const double lon_deg = haversine_m(GeoPoint{0, 0}, GeoPoint{0, 1});
    const double lat_deg = haversine_m(GeoPoint{0, 0}, GeoPoint{1, 0});
    CHECK(lon_deg == doctest::Approx(111195.0).epsilon(1e-4));
    CHECK(lat_deg == doctest::Approx(lon_deg).epsilon(1e-12));

    CHECK(lon_deg == doctest::Approx(law_of_cosines_m(GeoPoint{0, 0}, GeoPoint{0, 1})));
}

TEST_CASE("haversine agrees with the law-of-cosines oracle on random pairs") {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const GeoPoint a{rng.uniform(-60, 60), rng.uniform(-179, 179)};
        const GeoPoint b{a.lat + rng.uniform(-1, 1), a.lon + rng.uniform(-1, 1)};
        const double got = haversine_m(a, b);
        const double want = law_of_cosines_m(a, b);
        if (want > 10.0) {  // law of cosines is ill-conditioned for tiny angles
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("haversine symmetry and triangle inequality") {
    Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        const GeoPoint a{rng.uniform(-80, 80), rng.uniform(-180, 180)};
        const GeoPoint b{rng.uniform(-80, 80), rng.uniform(-180, 180)};
        const GeoPoint c{rng.uniform(-80, 80), rng.uniform(-180, 180)};
        CHECK(haversine_m(a, b) == doctest::Approx(haversine_m(b, a)).epsilon(1e-12));
        const double ab = haversine_m(a, b);
        const double bc = haversine_m(b, c);
        const double ac = haversine_m(a, c);
        CHECK(ac <= (ab + bc) * (1.0 + 1e-6) + 1e-9);
    }
}

TEST_CASE("cell_of anchors, offsets, and half-open boundaries") {
    GridSpec spec;
    spec.origin = GeoPoint{37.0, -122.0};
    spec.cell_size_m = 100.0;
    spec.cols = 10;
    spec.rows = 10;

    CHECK(cell_of(spec.origin, spec) == CellId{0, 0});

    // 150 m east, 250 m north, computed by inverting the projection.
    const GeoPoint p = testing::offset_point(spec.origin, 150, 250);
    CHECK(cell_of(p, spec) == CellId{1, 2});

    // A point whose east offset computes to exactly 100.0 belongs to
    // column 1. Nudge the longitude until the projected offset is exact.
    GeoPoint q = testing::offset_point(spec.origin, 100, 0);
    for (int i = 0; i < 8 && local_offset_m(spec.origin, q).east_m < 100.0; ++i) {
        q.lon = std::nextafter(q.lon, 180.0);
    }
    REQUIRE(local_offset_m(spec.origin, q).east_m >= 100.0);
    if (local_offset_m(spec.origin, q).east_m == 100.0) {
        CHECK(cell_of(q, spec) == CellId{1, 0});
    }

    CHECK_THROWS_AS(cell_of(testing::offset_point(spec.origin, -1, 0), spec), OutOfBounds);
    CHECK_THROWS_AS(cell_of(testing::offset_point(spec.origin, 0, 1001), spec), OutOfBounds);
}

TEST_CASE("cell_of partitions the box") {
    GridSpec spec;
    spec.origin = GeoPoint{37.0, -122.0};
    spec.cell_size_m = 100.0;
    spec.cols = 30;
    spec.rows = 30;

    Rng rng(13);
    for (int i = 0; i < 2000; ++i) {
        const GeoPoint p = testing::offset_point(
            spec.origin, rng.uniform(0, 30 * 100.0 - 1e-6), rng.uniform(0, 30 * 100.0 - 1e-6));
        if (!in_bounds(p, spec)) continue;
        const CellId c = cell_of(p, spec);
        CHECK(c.col >= 0);
        CHECK(c.col < spec.cols);
        CHECK(c.row >= 0);
        CHECK(c.row < spec.rows);
        const LocalOffset off = local_offset_m(spec.origin, p);
        CHECK(static_cast<std::int32_t>(std::floor(off.east_m / 100.0)) == c.col);
        CHECK(static_cast<std::int32_t>(std::floor(off.north_m / 100.0)) == c.row);
    }
}

TEST_CASE("local projection tracks haversine within 1% on a 50 km box") {
    const GeoPoint origin{37.0, -122.0};
    Rng rng(14);
    for (int i = 0; i < 500; ++i) {
        const GeoPoint a = testing::offset_point(origin, rng.uniform(0, 50'000),
                                                 rng.uniform(0, 50'000));
        const GeoPoint b = testing::offset_point(origin, rng.uniform(0, 50'000),
                                                 rng.uniform(0, 50'000));
        const double hav = haversine_m(a, b);
        if (hav < 1.0) continue;
        const LocalOffset oa = local_offset_m(origin, a);
        const LocalOffset ob = local_offset_m(origin, b);
        const double eucl = std::hypot(ob.east_m - oa.east_m, ob.north_m - oa.north_m);
        CHECK(std::abs(eucl - hav) / hav < 0.01);
    }
}

TEST_CASE("day_class follows the UTC calendar") {
    CHECK(day_class(testing::kMonday + 12 * 3600) == DayClass::Weekday);
    CHECK(day_class(testing::kSaturday + 12 * 3600) == DayClass::Weekend);
    CHECK(day_class(testing::kSaturday + 86400 + 12 * 3600) == DayClass::Weekend);  // Sunday
    CHECK(day_class(testing::kSaturday + 2 * 86400 + 12 * 3600) == DayClass::Weekday);

    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        const std::int64_t ts = static_cast<std::int64_t>(rng.below(2'000'000'000));
        CHECK(day_class(ts) == day_class(ts + 7 * 86400));
    }
}

TEST_CASE("point validation") {
    CHECK(valid_point(GeoPoint{0, 0}));
    CHECK(valid_point(GeoPoint{-90, 180}));
    CHECK_FALSE(valid_point(GeoPoint{90.5, 0}));
    CHECK_FALSE(valid_point(GeoPoint{0, -180.5}));
    CHECK_FALSE(valid_point(GeoPoint{std::nan(""), 0}));
}
