#include "nsscale/drpa.hpp"

#include <algorithm>
#include <sstream>

namespace nsscale {

using nlohmann::json;

double CostModel::cost(const CapacityVector& c) const
{
    double total = 0.0;
    for (auto d : kAllDimensions) {
        total += weights[d] * c[d];
    }
    return total;
}

std::vector<PopCapacity> pop_capacities(const ResourceInventory& inventory)
{
    std::vector<PopCapacity> out;
    for (const auto& p : inventory.pops()) {
        out.push_back({p.id, p.vim_ref, inventory.pop_available(p.id)});
    }
    return out;
}

std::vector<Presence> presences(const NsSnapshot& state, const PlacementConstraints& constraints)
{
    std::vector<Presence> out;
    for (const auto& inst : state.instances) {
        if (std::find(constraints.anti_affinity.begin(), constraints.anti_affinity.end(), inst.profile) ==
            constraints.anti_affinity.end()) {
            continue;
        }
        for (const auto& pop : inst.pops) {
            out.push_back({inst.profile, inst.id, pop});
        }
    }
    return out;
}

DemandEstimate estimate_demand(const std::vector<RuleVerdict>& verdicts, const CapacityVector& current,
                               const std::function<CapacityVector(const Id& scope)>& scope_capacity,
                               double target_utilization)
{
    DemandEstimate e;
    e.headroom = target_utilization;
    e.required = current;

    auto violated = [&](ScalingDirection dir) {
        return std::any_of(verdicts.begin(), verdicts.end(),
                           [&](const RuleVerdict& v) { return !v.satisfied && v.direction == dir; });
    };
    if (violated(ScalingDirection::scale_out)) {
        e.direction = ScalingDirection::scale_out;
    } else if (violated(ScalingDirection::scale_in)) {
        e.direction = ScalingDirection::scale_in;
    } else {
        return e;
    }

    std::map<Dimension, double> best;
    for (const auto& v : verdicts) {
        if (v.satisfied || v.direction != *e.direction) {
            continue;
        }
        for (const auto& o : v.observations) {
            const CapacityVector scope = o.scope == kNsSelf ? current : scope_capacity(o.scope);
            for (auto d : o.dimensions) {
                if (!v.violated_dimensions.count(d)) {
                    continue;
                }
                const double required = (current[d] - scope[d]) + o.value * scope[d] / target_utilization;
                auto it = best.find(d);
                if (it == best.end() || required > it->second) {
                    best[d] = required;
                    e.basis[d] = {o.value, scope[d]};
                }
            }
        }
    }
    for (const auto& [d, value] : best) {
        e.required[d] = std::max(0.0, value);
    }
    return e;
}

std::vector<Id> candidate_ns_ils(const Catalog& catalog, const NsDeploymentFlavor& flavor,
                                 const DemandEstimate& estimate, ScalingDirection direction, const Id& current,
                                 const CostModel& cost_model)
{
    if (!flavor.find_ns_il(current)) {
        throw UnknownIdError("NS-IL", current);
    }
    const double current_cost = cost_model.cost(aggregate_capacity(catalog, flavor, current));
    std::vector<Id> out;
    for (const auto& il : flavor.ns_ils) {
        if (il.id == current) {
            continue;
        }
        const CapacityVector cap = aggregate_capacity(catalog, flavor, il.id);
        if (!estimate.required.fits_within(cap, kCapacityTolerance)) {
            continue;
        }
        if (direction == ScalingDirection::scale_in && !(cost_model.cost(cap) < current_cost)) {
            continue;
        }
        out.push_back(il.id);
    }
    if (out.empty()) {
        std::ostringstream os;
        os << "no " << to_string(direction) << " NS-IL satisfies required capacity " << estimate.required
           << " from " << current;
        throw NoFeasibleLevelError(os.str());
    }
    return out;
}

Placement plan_placement(const std::vector<Addition>& additions, const std::vector<PopCapacity>& pops,
                         const std::vector<Presence>& existing)
{
    std::vector<PopCapacity> remaining = pops;
    std::sort(remaining.begin(), remaining.end(), [](const PopCapacity& a, const PopCapacity& b) { return a.pop < b.pop; });
    std::vector<Presence> present = existing;

    auto blocked = [&](const Addition& a, const Id& pop) {
        if (!a.anti_affinity) {
            return false;
        }
        return std::any_of(present.begin(), present.end(), [&](const Presence& p) {
            return p.label == *a.anti_affinity && p.pop == pop && p.owner != a.owner;
        });
    };

    Placement out;
    for (const auto& a : additions) {
        bool placed = false;
        std::optional<Dimension> shortfall;
        bool any_eligible = false;
        for (auto& pop : remaining) {
            if (blocked(a, pop.pop)) {
                continue;
            }
            if (a.spec.fits_within(pop.available, kCapacityTolerance)) {
                pop.available -= a.spec;
                out.pops[a.key] = pop.pop;
                out.selected_vims.insert(pop.vim);
                if (a.anti_affinity) {
                    present.push_back({*a.anti_affinity, a.owner, pop.pop});
                }
                placed = true;
                break;
            }
            if (!any_eligible) {
                shortfall = a.spec.first_excess(pop.available, kCapacityTolerance);
                any_eligible = true;
            }
        }
        if (!placed) {
            std::ostringstream os;
            os << "cannot place " << a.key << " " << a.spec;
            if (shortfall) {
                os << " (short on " << to_string(*shortfall) << ")";
            } else {
                os << " (no PoP satisfies anti-affinity)";
            }
            throw UnplaceableError(a.key, shortfall, os.str());
        }
    }
    return out;
}

DrpaDecision select_optimum(const std::vector<Id>& candidates, const CostModel& cost_model, const DrpaContext& ctx)
{
    DrpaDecision d;
    d.current_ns_il = ctx.state.current_ns_il;
    const auto existing = presences(ctx.state, ctx.constraints);

    struct Best {
        double cost;
        int instances;
        int index;
        std::size_t rationale;
        TransitionPlan plan;
        Placement placement;
    };
    std::optional<Best> best;
    std::ostringstream failures;

    for (const auto& id : candidates) {
        CandidateEvaluation ev;
        ev.ns_il = id;
        ev.is_candidate = true;
        ev.capacity = aggregate_capacity(*ctx.catalog, *ctx.flavor, id);
        ev.cost = cost_model.cost(ev.capacity);
        ev.instances = total_instances(*ctx.flavor, id);
        TransitionPlan plan =
            plan_transition(*ctx.catalog, *ctx.flavor, ctx.state, id, ctx.constraints.anti_affinity);
        try {
            Placement placement = plan_placement(plan.additions, ctx.capacity, existing);
            ev.placeable = true;
            const int index = ctx.flavor->ns_il_index(id);
            const bool better = !best || ev.cost < best->cost ||
                                (ev.cost == best->cost && (ev.instances < best->instances ||
                                                           (ev.instances == best->instances && index < best->index)));
            if (better) {
                best = Best{ev.cost, ev.instances, index, d.rationale.size(), std::move(plan), std::move(placement)};
            }
        } catch (const UnplaceableError& e) {
            ev.reason = std::string("unplaceable: ") + e.what();
            failures << " " << id << ": " << e.what() << ";";
        }
        d.rationale.push_back(std::move(ev));
    }
    if (!best) {
        throw UnplaceableError("", std::nullopt, "no placeable candidate:" + failures.str());
    }
    for (auto& ev : d.rationale) {
        if (ev.placeable && ev.reason.empty()) {
            ev.reason = "higher cost or later tie-break";
        }
    }
    d.rationale[best->rationale].chosen = true;
    d.rationale[best->rationale].reason.clear();
    d.action = DrpaDecision::Action::scale;
    d.target_ns_il = d.rationale[best->rationale].ns_il;
    d.classification = best->plan.classification;
    d.placement = std::move(best->placement.pops);
    d.selected_vims = std::move(best->placement.selected_vims);
    return d;
}

namespace {

CapacityVector scope_capacity(const DrpaContext& ctx, const Id& vnfd_id)
{
    CapacityVector total;
    const NsInstantiationLevel* il = ctx.flavor->find_ns_il(ctx.state.current_ns_il);
    if (!il) {
        throw UnknownIdError("NS-IL", ctx.state.current_ns_il);
    }
    for (const auto& [profile_id, entry] : il->vnf_entries) {
        const VnfProfile* profile = ctx.flavor->find_vnf_profile(profile_id);
        if (!profile || profile->vnfd_ref != vnfd_id || entry.instance_count == 0) {
            continue;
        }
        const auto [vnfd, vf] = resolve_profile(*ctx.catalog, *profile);
        total += static_cast<double>(entry.instance_count) * vnf_il_capacity(*vnfd, *vf, entry.vnf_il_ref);
    }
    return total;
}

} // namespace

DrpaDecision decide(const DrpaInput& input, const CostModel& cost_model, double target_utilization)
{
    const DrpaContext& ctx = input.context;
    const CapacityVector current = aggregate_capacity(*ctx.catalog, *ctx.flavor, ctx.state.current_ns_il);
    DemandEstimate estimate = estimate_demand(
        input.verdicts, current, [&](const Id& scope) { return scope_capacity(ctx, scope); }, target_utilization);

    if (!estimate.direction) {
        DrpaDecision d;
        d.current_ns_il = ctx.state.current_ns_il;
        d.estimate = std::move(estimate);
        d.verdicts = input.verdicts;
        return d;
    }
    const ScalingDirection direction = *estimate.direction;
    const auto candidates =
        candidate_ns_ils(*ctx.catalog, *ctx.flavor, estimate, direction, ctx.state.current_ns_il, cost_model);
    DrpaDecision d = select_optimum(candidates, cost_model, ctx);
    d.direction = direction;
    d.estimate = std::move(estimate);
    d.verdicts = input.verdicts;

    // Extend the rationale to every declared NS-IL.
    const double current_cost = cost_model.cost(current);
    std::vector<CandidateEvaluation> full;
    for (const auto& il : ctx.flavor->ns_ils) {
        auto it = std::find_if(d.rationale.begin(), d.rationale.end(),
                               [&](const CandidateEvaluation& e) { return e.ns_il == il.id; });
        if (it != d.rationale.end()) {
            full.push_back(*it);
            continue;
        }
        CandidateEvaluation ev;
        ev.ns_il = il.id;
        ev.capacity = aggregate_capacity(*ctx.catalog, *ctx.flavor, il.id);
        ev.cost = cost_model.cost(ev.capacity);
        ev.instances = total_instances(*ctx.flavor, il.id);
        if (il.id == ctx.state.current_ns_il) {
            ev.reason = "current level";
        } else if (auto dim = d.estimate.required.first_excess(ev.capacity, kCapacityTolerance)) {
            ev.reason = "insufficient " + std::string(to_string(*dim));
        } else if (direction == ScalingDirection::scale_in && !(ev.cost < current_cost)) {
            ev.reason = "not cheaper than current level";
        }
        full.push_back(std::move(ev));
    }
    d.rationale = std::move(full);
    return d;
}

json to_json(const DrpaDecision& d)
{
    json verdicts = json::array();
    for (const auto& v : d.verdicts) {
        json dims = json::array();
        for (auto dim : v.violated_dimensions) {
            dims.push_back(to_string(dim));
        }
        json obs = json::array();
        for (const auto& o : v.observations) {
            obs.push_back({{"ref", o.ref}, {"scope", o.scope}, {"value", o.value}});
        }
        verdicts.push_back({{"rule", v.rule_id},
                            {"satisfied", v.satisfied},
                            {"in_cooldown", v.in_cooldown},
                            {"direction", to_string(v.direction)},
                            {"time", v.time},
                            {"violated_dimensions", dims},
                            {"missing_refs", v.missing_refs},
                            {"observations", obs}});
    }
    json basis = json::object();
    for (const auto& [dim, b] : d.estimate.basis) {
        basis[std::string(to_string(dim))] = {{"utilization", b.first}, {"capacity", b.second}};
    }
    json rationale = json::array();
    for (const auto& c : d.rationale) {
        rationale.push_back({{"ns_il", c.ns_il},
                             {"capacity", c.capacity},
                             {"cost", c.cost},
                             {"instances", c.instances},
                             {"candidate", c.is_candidate},
                             {"placeable", c.placeable},
                             {"chosen", c.chosen},
                             {"reason", c.reason}});
    }
    json placement = json::object();
    for (const auto& [key, pop] : d.placement) {
        placement[key] = pop;
    }
    return {{"action", d.action == DrpaDecision::Action::scale ? "scale" : "none"},
            {"current_ns_il", d.current_ns_il},
            {"target_ns_il", d.target_ns_il},
            {"classification", to_string(d.classification)},
            {"direction", d.direction ? json(to_string(*d.direction)) : json(nullptr)},
            {"estimate", {{"required", d.estimate.required}, {"target_utilization", d.estimate.headroom}, {"basis", basis}}},
            {"placement", placement},
            {"selected_vims", d.selected_vims},
            {"rationale", rationale},
            {"verdicts", verdicts}};
}

} // namespace nsscale
