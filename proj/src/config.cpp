#include "trajroute/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "trajroute/data.hpp"

namespace trajroute {

void Config::validate() const {
    if (cell_size_m <= 0) {
        throw Error("config: cell_size_m must be positive");
    }
    try {
        cost.validate();
    } catch (const Error& e) {
        throw Error(std::string("config: ") + e.what());
    }
    if (bbox.has_value()) {
        if (bbox->min_lat >= bbox->max_lat || bbox->min_lon >= bbox->max_lon) {
            throw Error("config: bbox must have min < max on both axes");
        }
    }
}

void apply_config_file(Config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file " + path);
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("config file " + path + ": " + e.what());
    }

    const std::set<std::string> known = {"trajectories", "roads",  "snapshot", "cell_size_m",
                                         "bbox",         "cost",   "seed",     "query_count"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) {
            throw Error("config file " + path + ": unknown key '" + key + "'");
        }
    }

    if (doc.contains("trajectories")) cfg.trajectories_path = doc["trajectories"].get<std::string>();
    if (doc.contains("roads")) cfg.roads_path = doc["roads"].get<std::string>();
    if (doc.contains("snapshot")) cfg.snapshot_path = doc["snapshot"].get<std::string>();
    if (doc.contains("cell_size_m")) cfg.cell_size_m = doc["cell_size_m"].get<double>();

    if (doc.contains("bbox")) {
        const auto& b = doc["bbox"];
        GeoBounds bounds;
        bounds.min_lat = b.at("min_lat").get<double>();
        bounds.min_lon = b.at("min_lon").get<double>();
        bounds.max_lat = b.at("max_lat").get<double>();
        bounds.max_lon = b.at("max_lon").get<double>();
        cfg.bbox = bounds;
    }

    if (doc.contains("cost")) {
        const auto& c = doc["cost"];
        const std::set<std::string> cost_keys = {"tau_c", "r_penalty", "rw",
                                                 "w_time", "d_thres",  "v_max"};
        for (const auto& [key, value] : c.items()) {
            if (!cost_keys.count(key)) {
                throw Error("config file " + path + ": unknown cost key '" + key + "'");
            }
        }
        if (c.contains("tau_c")) cfg.cost.tau_c = c["tau_c"].get<double>();
        if (c.contains("r_penalty")) cfg.cost.r_penalty = c["r_penalty"].get<double>();
        if (c.contains("rw")) cfg.cost.rw = c["rw"].get<double>();
        if (c.contains("w_time")) cfg.cost.w_time = c["w_time"].get<std::int32_t>();
        if (c.contains("d_thres")) cfg.cost.d_thres = c["d_thres"].get<double>();
        if (c.contains("v_max")) cfg.cost.v_max = c["v_max"].get<double>();
    }

    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("query_count")) cfg.query_count = doc["query_count"].get<std::size_t>();
}

}  // namespace trajroute
