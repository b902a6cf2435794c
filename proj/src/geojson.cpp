#include "trajroute/geojson.hpp"

#include <json.hpp>

namespace trajroute {

namespace {

using Json = nlohmann::ordered_json;

Json coords_of(const std::vector<GeoPoint>& path) {
    Json arr = Json::array();
    for (const auto& p : path) {
        arr.push_back(Json::array({p.lon, p.lat}));  // GeoJSON order is [lon, lat]
    }
    return arr;
}

Json geometry_of(const std::vector<GeoPoint>& path) {
    Json geom;
    if (path.size() == 1) {
        geom["type"] = "Point";
        geom["coordinates"] = Json::array({path[0].lon, path[0].lat});
    } else {
        geom["type"] = "LineString";
        geom["coordinates"] = coords_of(path);
    }
    return geom;
}

const char* kind_name(SourceKind k) {
    return k == SourceKind::Trajectory ? "trajectory" : "road";
}

}  // namespace

std::string route_to_geojson(const RouteResult& route, bool explode_legs) {
    Json legs = Json::array();
    for (const auto& leg : route.legs) {
        Json j;
        j["kind"] = kind_name(leg.kind);
        j["id"] = leg.item_id;
        j["from_idx"] = leg.from_idx;
        j["to_idx"] = leg.to_idx;
        j["switched"] = leg.entered_by_switch;
        legs.push_back(j);
    }

    Json feature;
    feature["type"] = "Feature";
    feature["geometry"] = geometry_of(route.path);
    feature["properties"]["eta_s"] = route.eta_s;
    feature["properties"]["distance_m"] = path_length_m(route.path);
    feature["properties"]["legs"] = legs;

    Json features = Json::array({feature});
    if (explode_legs) {
        // Per-leg features reuse the route geometry sliced by leg span.
        // Legs are defined over item point indices, so slice by walking
        // the path alongside the legs.
        std::size_t cursor = 1;  // path[0] is the query origin
        for (const auto& leg : route.legs) {
            const std::size_t span = static_cast<std::size_t>(leg.to_idx - leg.from_idx) + 1;
            std::vector<GeoPoint> slice;
            for (std::size_t i = 0; i < span && cursor + i < route.path.size(); ++i) {
                slice.push_back(route.path[cursor + i]);
            }
            cursor += span;
            Json f;
            f["type"] = "Feature";
            f["geometry"] = geometry_of(slice);
            f["properties"]["kind"] = kind_name(leg.kind);
            f["properties"]["id"] = leg.item_id;
            f["properties"]["from_idx"] = leg.from_idx;
            f["properties"]["to_idx"] = leg.to_idx;
            features.push_back(f);
        }
    }

    Json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = features;
    return doc.dump();
}

}  // namespace trajroute
