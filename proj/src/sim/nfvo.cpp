#include <algorithm>
#include <set>

#include "nsscale/sim/world.hpp"

namespace nsscale::sim {

namespace {

bool is_notification(const std::string& name)
{
    return name == "PerfInfoAvailable" || name == "ThresholdCrossed" || name == "VnfIndicatorNotify";
}

/// VIM actor -> {vim, pops, items} for the op's additions.
nlohmann::json connectivity(const World& w, const ScalingOperation& op)
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto& a : op.additions) {
        const Id& pop = op.placement.at(a.key);
        const Id& vim = w.repo.resources.pop(pop).vim_ref;
        auto& entry = out[w.vim_actor(vim)];
        entry["vim"] = vim;
        auto& pops = entry["pops"];
        if (!pops.is_array()) {
            pops = nlohmann::json::array();
        }
        if (std::find(pops.begin(), pops.end(), pop) == pops.end()) {
            pops.push_back(pop);
        }
        entry["items"].push_back(a.key);
    }
    return out;
}

void send_grant(World& w, ScalingOperation& op, bool granted, const std::string& reason)
{
    Message m{"GrantResponse", kNfvo, op.vnfm, 10, op.op_id, {{"granted", granted}}};
    if (granted) {
        m.payload["reservation_ids"] = op.reservations;
        m.payload["vim_connectivity"] = connectivity(w, op);
    } else {
        m.payload["reason"] = reason;
    }
    w.send(std::move(m));
}

void grant_allocate(World& w, ScalingOperation& op, const Message& m)
{
    std::vector<Id> expected;
    for (const auto& a : op.additions) {
        if (a.kind == Addition::Kind::vnfc) {
            expected.push_back(a.vdu);
        }
    }
    std::vector<Id> requested = m.payload.at("vdu_ids").get<std::vector<Id>>();
    std::sort(expected.begin(), expected.end());
    std::sort(requested.begin(), requested.end());
    if (expected != requested) {
        send_grant(w, op, false, "requested VDUs do not match the decision");
        return;
    }

    std::map<Id, CapacityVector> per_pop;
    for (const auto& a : op.additions) {
        per_pop[op.placement.at(a.key)] += a.spec;
    }
    for (const auto& [pop, need] : per_pop) {
        if (auto d = need.first_excess(w.repo.resources.pop_available(pop), kCapacityTolerance)) {
            send_grant(w, op, false,
                       "capacity vanished in " + pop + " (" + std::string(to_string(*d)) + ")");
            return;
        }
    }

    if (!w.reservation_enabled || op.additions.empty()) {
        send_grant(w, op, true, "");
        return;
    }

    // VIM actor -> (pops, spec per kind)
    std::map<std::string, std::pair<std::vector<Id>, std::map<ResourceKind, CapacityVector>>> groups;
    for (const auto& a : op.additions) {
        const Id& pop = op.placement.at(a.key);
        auto& g = groups[w.vim_actor(w.repo.resources.pop(pop).vim_ref)];
        if (std::find(g.first.begin(), g.first.end(), pop) == g.first.end()) {
            g.first.push_back(pop);
        }
        for (ResourceKind k : kAllResourceKinds) {
            g.second[k] += restrict_to(a.spec, k);
        }
    }
    for (auto& [vim, g] : groups) {
        std::sort(g.first.begin(), g.first.end());
        for (ResourceKind k : kAllResourceKinds) {
            w.send(Message{"ReserveRequest", kNfvo, vim, 7, op.op_id,
                           {{"kind", to_string(k)},
                            {"spec", capacity_json(g.second[k])},
                            {"placement_constraints", {{"pops", g.first}}}}});
            ++op.pending_reservations;
        }
    }
}

void on_reserve_response(World& w, ScalingOperation& op, const Message& m)
{
    --op.pending_reservations;
    if (m.payload.contains("error")) {
        if (op.reservation_error.empty()) {
            op.reservation_error = m.payload.at("error").get<std::string>();
        }
    } else {
        op.reservations.push_back({{"id", m.payload.at("reservation_id")},
                                   {"vim", m.src},
                                   {"kind", m.payload.at("kind")}});
    }
    if (op.pending_reservations > 0) {
        return;
    }
    if (!op.reservation_error.empty()) {
        rollback_allocations(w, op);
        op.reservations.clear();
        send_grant(w, op, false, op.reservation_error);
        return;
    }
    send_grant(w, op, true, "");
}

// A VL-only operation is driven by the NFVO directly (steps 11-13, 25-27).
void modify_vl_release(World& w, ScalingOperation& op)
{
    op.release_handles = vl_release_handles(w, op);
    if (op.release_handles.empty()) {
        complete_op(w, op);
        return;
    }
    for (auto& [vim, handles] : handles_by_vim(w, op.release_handles)) {
        w.send(Message{"ReleaseRequest", kNfvo, vim, 25, op.op_id, {{"handles", handles}}});
        ++op.pending_releases;
    }
}

void modify_vl_start(World& w, ScalingOperation& op)
{
    std::map<std::string, std::pair<CapacityVector, nlohmann::json>> groups;
    for (const auto& a : op.additions) {
        const Id& pop = op.placement.at(a.key);
        auto& g = groups[w.vim_actor(w.repo.resources.pop(pop).vim_ref)];
        g.first += a.spec;
        g.second.push_back({{"key", a.key}, {"spec", capacity_json(a.spec)}, {"pop", pop}});
    }
    if (groups.empty()) {
        modify_vl_release(w, op);
        return;
    }
    for (auto& [vim, g] : groups) {
        w.send(Message{"AllocateRequest", kNfvo, vim, 11, op.op_id,
                       {{"kind", "network"}, {"spec", capacity_json(g.first)}, {"items", g.second}}});
        ++op.pending_allocations;
    }
}

void start_op(World& w)
{
    const PlannedOp& planned = w.plan->ops[w.next_plan_op];
    ScalingOperation op;
    op.op_id = "op-" + std::to_string(w.ops.size() + 1);
    op.kind = planned.kind;
    op.plan = planned;
    for (const Addition* a : additions_of(*w.plan, planned)) {
        op.additions.push_back(*a);
        op.placement[a->key] = w.decision->placement.at(a->key);
    }
    if (planned.kind == OpKind::add_vnf) {
        op.vnf_instance = w.repo.new_vnf_instance_id(planned.profile);
    } else if (planned.kind != OpKind::modify_vl) {
        op.vnf_instance = planned.owner;
    }
    if (planned.kind != OpKind::modify_vl) {
        op.vnfm = w.vnfm_for_vnfd(planned.vnfd);
        op.em = w.em_for_vnfd(planned.vnfd);
    }
    const Id id = op.op_id;
    w.ops.emplace(id, std::move(op));
    w.op_order.push_back(id);
    ScalingOperation& o = w.ops.at(id);

    if (o.kind == OpKind::modify_vl) {
        modify_vl_start(w, o);
        return;
    }
    nlohmann::json payload{{"op", to_string(o.kind)}, {"vnf_instance", o.vnf_instance}};
    payload["new_vnf_il"] = o.plan.to_il.empty() ? nlohmann::json(nullptr) : nlohmann::json(o.plan.to_il);
    w.send(Message{"ScaleVnfToLevelRequest", kNfvo, o.vnfm, 5, id, std::move(payload)});
}

Tick notification_time(const Message& m)
{
    return m.payload.contains("time") ? m.payload.at("time").get<Tick>() : 0;
}

} // namespace

void nfvo_on_notification(World& w, const Message& m)
{
    if (w.repo.ns.state != NsState::instantiated || w.repo.ns.blocked) {
        return;
    }
    const Tick t = notification_time(m);
    std::vector<RuleVerdict> verdicts = w.engine.evaluate(w.store, t);
    const bool violated = std::any_of(verdicts.begin(), verdicts.end(),
                                      [](const RuleVerdict& v) { return !v.satisfied && !v.in_cooldown; });
    if (!violated) {
        return;
    }
    const auto& opts = w.scenario.options;
    Message out{"DrpaDecision", kNfvo, kNfvo, 4, "", {{"current_ns_il", w.repo.ns.current_ns_il}}};
    try {
        DrpaInput in{w.drpa_context(), std::move(verdicts)};
        DrpaDecision d = decide(in, opts.cost_model, opts.target_utilization);
        if (d.action == DrpaDecision::Action::none) {
            return;
        }
        w.plan = plan_transition(w.catalog, w.flavor, in.context.state, d.target_ns_il,
                                 opts.constraints.anti_affinity);
        out.payload["action"] = "scale";
        out.payload["target_ns_il"] = d.target_ns_il;
        out.payload["classification"] = to_string(d.classification);
        out.payload["selected_vims"] = d.selected_vims;
        w.decision = std::move(d);
        w.repo.ns.state = NsState::scaling;
    } catch (const NoFeasibleLevelError& e) {
        out.payload["action"] = "none";
        out.payload["error"] = e.what();
    } catch (const UnplaceableError& e) {
        out.payload["action"] = "none";
        out.payload["error"] = e.what();
    }
    w.send(std::move(out));
}

void nfvo_start_plan(World& w)
{
    w.decisions.push_back(*w.decision);
    w.next_plan_op = 0;
    if (w.plan->ops.empty()) {
        w.repo.ns.current_ns_il = w.plan->to;
        w.repo.ns.state = NsState::instantiated;
        w.plan.reset();
        return;
    }
    start_op(w);
}

void nfvo_on_op_complete(World& w, const Id&)
{
    ++w.next_plan_op;
    if (w.next_plan_op < w.plan->ops.size()) {
        start_op(w);
        return;
    }
    w.repo.ns.current_ns_il = w.plan->to;
    w.repo.ns.state = NsState::instantiated;
    w.plan.reset();
    w.decision.reset();
}

void nfvo_on_op_failed(World& w, const Id&, const std::string&)
{
    w.repo.ns.state = NsState::instantiated;
    w.plan.reset();
    w.decision.reset();
}

void nfvo_handle(World& w, const Message& m)
{
    if (is_notification(m.name)) {
        nfvo_on_notification(w, m);
        return;
    }
    if (m.name == "DrpaDecision") {
        if (m.payload.value("action", "") == "scale" && w.decision) {
            nfvo_start_plan(w);
        }
        return;
    }
    if (m.op_id.empty()) {
        return;
    }
    ScalingOperation& op = w.op(m.op_id);
    if (op.phase == Phase::failed || op.phase == Phase::completed) {
        return;
    }
    if (m.name == "GrantRequest") {
        if (m.payload.at("intent") == "release") {
            w.send(Message{"GrantResponse", kNfvo, op.vnfm, 20, op.op_id, {{"granted", true}}});
        } else {
            grant_allocate(w, op, m);
        }
    } else if (m.name == "ReserveResponse") {
        on_reserve_response(w, op, m);
    } else if (m.name == "OperateVnfRequest") {
        const int step = m.step.value_or(16) == 16 ? 17 : 22;
        w.send(Message{"OperateVnfGrant", kNfvo, op.vnfm, step, op.op_id,
                       {{"op_id", op.op_id}, {"target_state", m.payload.at("target_state")}}});
    } else if (m.name == "AllocateResponse") {
        --op.pending_allocations;
        if (m.payload.contains("error")) {
            op.allocation_error = m.payload.at("error").get<std::string>();
        } else {
            for (const auto& h : m.payload.at("handles")) {
                op.allocated.push_back({h.at("key"), h.at("handle"), h.at("zone"),
                                        *parse_resource_kind(h.at("kind").get<std::string>())});
            }
        }
        if (op.pending_allocations == 0) {
            if (!op.allocation_error.empty()) {
                fail_op(w, op, op.allocation_error);
                return;
            }
            attach_vl_handles(w, op);
            modify_vl_release(w, op);
        }
    } else if (m.name == "ReleaseResponse") {
        if (--op.pending_releases == 0) {
            complete_op(w, op);
        }
    }
}

} // namespace nsscale::sim
