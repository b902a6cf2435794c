#pragma once

#include <cstdint>

#include "trajroute/index.hpp"

namespace trajroute {

// Engine tunables. Defaults: zero transition cost, 30-minute temporal
// window, 100 m arrival threshold, 70 mph area speed cap.
struct CostParams {
    double tau_c = 0.0;        // per-switch transition cost, seconds
    double r_penalty = 0.0;    // road-leg penalty multiplier is (1 + r_penalty)
    double rw = 0.0;           // continuity reward; continue legs scale by e^{-rw}
    std::int32_t w_time = 1800;  // temporal window, seconds
    double d_thres = 100.0;    // destination arrival radius, meters
    double v_max = 31.29;      // maximum area speed, m/s

    void validate() const;
};

enum class TransitionKind : std::uint8_t {
    TrajContinue,
    TrajSwitch,
    RoadContinue,
    RoadSwitch,
    CrossToRoad,   // trajectory node -> road point
    CrossToTraj,   // road node -> trajectory point
};

bool is_continue(TransitionKind k);
bool to_road(TransitionKind k);

// One admissible move between indexed points. Continue moves require
// `to` to be `from`'s successor within the same item; switch moves
// charge the (predecessor(to) -> to) leg on the destination item.
struct Transition {
    PointRef from;
    PointRef to;
    TransitionKind kind = TransitionKind::TrajContinue;
};

// Physical travel time of a leg next to its penalty/reward-adjusted
// value. ETAs sum base_s; the search frontier orders by search_s.
struct CostPair {
    double base_s = 0.0;
    double search_s = 0.0;
};

// Cost evaluation over the ingested stores.
class CostModel {
public:
    CostModel(const TrajectoryDB& db, const RoadNetwork& net, const CostParams& params)
        : db_(&db), net_(&net), params_(params) {}

    const CostParams& params() const { return params_; }

    // Timestamp-difference cost between trajectory points; switches add
    // tau_c and charge the destination item's incoming leg.
    double cost_traj(const Transition& t) const;

    // Distance-over-speed cost between road points.
    double cost_road(const Transition& t) const;

    // Base cost dispatched on destination kind, plus the adjusted
    // search cost: road destinations scale by (1 + r_penalty),
    // same-trajectory continuation scales by e^{-rw}.
    CostPair cost_final(const Transition& t) const;

    // Straight-line time lower bound to the destination.
    double heuristic(const GeoPoint& p, const GeoPoint& dest) const;

private:
    void check_kind(const Transition& t, bool want_road_dest) const;

    const TrajectoryDB* db_;
    const RoadNetwork* net_;
    CostParams params_;
};

}  // namespace trajroute
