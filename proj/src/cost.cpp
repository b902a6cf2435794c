#include "trajroute/cost.hpp"

#include <cmath>

namespace trajroute {

void CostParams::validate() const {
    if (tau_c < 0 || r_penalty < 0 || rw < 0 || w_time < 0 || d_thres < 0) {
        throw Error("cost parameters must be non-negative");
    }
    if (v_max <= 0) {
        throw Error("v_max must be positive");
    }
}

bool is_continue(TransitionKind k) {
    return k == TransitionKind::TrajContinue || k == TransitionKind::RoadContinue;
}

bool to_road(TransitionKind k) {
    return k == TransitionKind::RoadContinue || k == TransitionKind::RoadSwitch ||
           k == TransitionKind::CrossToRoad;
}

void CostModel::check_kind(const Transition& t, bool want_road_dest) const {
    if (to_road(t.kind) != want_road_dest) {
        throw InvalidTransition("transition kind does not match destination type");
    }
}

double CostModel::cost_traj(const Transition& t) const {
    check_kind(t, /*want_road_dest=*/false);
    const ResolvedPoint to = resolve(*db_, *net_, t.to);
    if (t.kind == TransitionKind::TrajContinue) {
        if (t.from.item != t.to.item || t.from.point + 1 != t.to.point) {
            throw InvalidTransition("continue transition must target the successor point");
        }
        const ResolvedPoint from = resolve(*db_, *net_, t.from);
        return static_cast<double>(std::llabs(*to.ts - *from.ts));
    }
    // Switch: charge the incoming leg on the new trajectory.
    if (!to.predecessor.has_value()) {
        throw InvalidTransition("switch target has no predecessor");
    }
    const ResolvedPoint junction = resolve(*db_, *net_, *to.predecessor);
    return params_.tau_c + static_cast<double>(std::llabs(*to.ts - *junction.ts));
}

double CostModel::cost_road(const Transition& t) const {
    check_kind(t, /*want_road_dest=*/true);
    const ResolvedPoint to = resolve(*db_, *net_, t.to);
    const double speed = net_->segments[t.to.item].speed_limit_mps;
    if (t.kind == TransitionKind::RoadContinue) {
        if (t.from.item != t.to.item || t.from.point + 1 != t.to.point) {
            throw InvalidTransition("continue transition must target the successor point");
        }
        const ResolvedPoint from = resolve(*db_, *net_, t.from);
        return haversine_m(from.pos, to.pos) / speed;
    }
    if (!to.predecessor.has_value()) {
        throw InvalidTransition("switch target has no predecessor");
    }
    const ResolvedPoint junction = resolve(*db_, *net_, *to.predecessor);
    return params_.tau_c + haversine_m(junction.pos, to.pos) / speed;
}

CostPair CostModel::cost_final(const Transition& t) const {
    CostPair c;
    c.base_s = to_road(t.kind) ? cost_road(t) : cost_traj(t);
    if (to_road(t.kind)) {
        c.search_s = (1.0 + params_.r_penalty) * c.base_s;
    } else if (t.kind == TransitionKind::TrajContinue) {
        c.search_s = std::exp(-params_.rw) * c.base_s;
    } else {
        c.search_s = c.base_s;
    }
    return c;
}

double CostModel::heuristic(const GeoPoint& p, const GeoPoint& dest) const {
    return haversine_m(p, dest) / params_.v_max;
}

}  // namespace trajroute
