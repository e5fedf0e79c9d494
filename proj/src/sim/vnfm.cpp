#include <algorithm>

#include "nsscale/sim/world.hpp"

namespace nsscale::sim {

namespace {

std::vector<const Addition*> vnfc_additions(const ScalingOperation& op)
{
    std::vector<const Addition*> out;
    for (const auto& a : op.additions) {
        if (a.kind == Addition::Kind::vnfc) {
            out.push_back(&a);
        }
    }
    return out;
}

const Vnfd& vnfd_of(const World& w, const ScalingOperation& op)
{
    return w.catalog.vnfd(op.plan.vnfd);
}

std::vector<Id> internal_vl_ids(const World& w, const ScalingOperation& op)
{
    std::vector<Id> out;
    for (const auto& vl : vnfd_of(w, op).internal_vlds) {
        out.push_back(vl.id);
    }
    return out;
}

const VnfInfo* info_of(const World& w, const ScalingOperation& op)
{
    auto it = w.repo.vnfs.find(op.vnf_instance);
    return it == w.repo.vnfs.end() ? nullptr : &it->second;
}

void apply(World& w, const Id& vnf_instance, const VnfInfoChange& change, int step)
{
    VnfInfo& info = w.repo.vnfs.at(vnf_instance);
    info = record_vnf_info_update(info, change, step, w.now);
}

/// Whether the VNF-IL still has to be written to the VnfInfo.
bool il_pending(const World& w, const ScalingOperation& op)
{
    if (op.il_recorded || op.plan.to_il.empty()) {
        return false;
    }
    const VnfInfo* info = info_of(w, op);
    return info && info->current_vnf_il != op.plan.to_il;
}

void self_update(World& w, const ScalingOperation& op, int step, VnfInfoChangeKind kind, const std::vector<Id>& ids)
{
    nlohmann::json payload{{"vnf_instance", op.vnf_instance}, {"change", to_string(kind)}, {"instance_ids", ids}};
    if (!op.plan.to_il.empty()) {
        payload["vnf_il"] = op.plan.to_il;
    }
    w.send(Message{"VnfInfoUpdate", op.vnfm, op.vnfm, step, op.op_id, std::move(payload)});
}

void send_release_requests(World& w, ScalingOperation& op)
{
    std::vector<Id> handles;
    if (const VnfInfo* info = info_of(w, op)) {
        for (const auto& id : op.removed_vnfcs) {
            const VnfcInstance* c = info->find_vnfc(id);
            if (c->compute_handle) {
                handles.push_back(*c->compute_handle);
            }
            handles.insert(handles.end(), c->storage_handles.begin(), c->storage_handles.end());
        }
    }
    handles.insert(handles.end(), op.release_handles.begin(), op.release_handles.end());
    for (auto& [vim, hs] : handles_by_vim(w, handles)) {
        w.send(Message{"ReleaseRequest", op.vnfm, vim, 25, op.op_id, {{"handles", hs}}});
        ++op.pending_releases;
    }
    if (op.pending_releases == 0) {
        self_update(w, op, 28, VnfInfoChangeKind::delete_instances, op.removed_vnfcs);
    }
}

void begin_release(World& w, ScalingOperation& op)
{
    if (const VnfInfo* info = info_of(w, op)) {
        for (const auto& [vdu, n] : op.plan.delta.remove) {
            int left = n;
            for (auto it = info->vnfc_instances.rbegin(); it != info->vnfc_instances.rend() && left > 0; ++it) {
                if (it->vdu_ref == vdu && it->state == VnfcState::started &&
                    std::find(op.new_vnfcs.begin(), op.new_vnfcs.end(), it->id) == op.new_vnfcs.end()) {
                    op.removed_vnfcs.push_back(it->id);
                    --left;
                }
            }
        }
    }
    op.release_handles = vl_release_handles(w, op);
    if (op.removed_vnfcs.empty() && op.release_handles.empty()) {
        if (il_pending(w, op)) {
            self_update(w, op, 28, VnfInfoChangeKind::set_vnf_il, {});
        } else {
            complete_op(w, op);
        }
        return;
    }
    std::vector<Id> vdus;
    if (const VnfInfo* info = info_of(w, op)) {
        for (const auto& id : op.removed_vnfcs) {
            vdus.push_back(info->find_vnfc(id)->vdu_ref);
        }
    }
    w.send(Message{"GrantRequest", op.vnfm, kNfvo, 20, op.op_id,
                   {{"op_id", op.op_id},
                    {"vdu_ids", vdus},
                    {"internal_vl_ids", op.removed_vnfcs.empty() ? std::vector<Id>{} : internal_vl_ids(w, op)},
                    {"intent", "release"}}});
}

void begin(World& w, ScalingOperation& op)
{
    if (op.additions.empty()) {
        begin_release(w, op);
        return;
    }
    std::vector<Id> vdus;
    for (const Addition* a : vnfc_additions(op)) {
        vdus.push_back(a->vdu);
    }
    w.send(Message{"GrantRequest", op.vnfm, kNfvo, 6, op.op_id,
                   {{"op_id", op.op_id},
                    {"vdu_ids", vdus},
                    {"internal_vl_ids", vdus.empty() ? std::vector<Id>{} : internal_vl_ids(w, op)},
                    {"intent", "allocate"}}});
}

struct Item {
    std::string key;
    ResourceKind kind;
    CapacityVector spec;
    Id pop;
    std::string vim;
};

std::vector<Item> items_of(const World& w, const ScalingOperation& op)
{
    std::vector<Item> out;
    for (const auto& a : op.additions) {
        const Id& pop = op.placement.at(a.key);
        const std::string vim = w.vim_actor(w.repo.resources.pop(pop).vim_ref);
        if (a.kind == Addition::Kind::vl) {
            out.push_back({a.key, ResourceKind::network, a.spec, pop, vim});
            continue;
        }
        out.push_back({a.key, ResourceKind::compute, restrict_to(a.spec, ResourceKind::compute), pop, vim});
        if (a.spec.storage > 0) {
            out.push_back({a.key, ResourceKind::storage, restrict_to(a.spec, ResourceKind::storage), pop, vim});
        }
    }
    return out;
}

nlohmann::json items_json(const std::vector<const Item*>& items)
{
    nlohmann::json out = nlohmann::json::array();
    for (const Item* i : items) {
        out.push_back({{"key", i->key}, {"spec", capacity_json(i->spec)}, {"pop", i->pop}});
    }
    return out;
}

void on_allocate_grant(World& w, ScalingOperation& op, const Message& m)
{
    if (!m.payload.at("granted").get<bool>()) {
        fail_op(w, op, "grant denied: " + m.payload.value("reason", std::string{}));
        return;
    }
    const std::vector<Item> items = items_of(w, op);
    if (w.reservation_enabled) {
        for (const auto& r : m.payload.at("reservation_ids")) {
            const std::string vim = r.at("vim");
            const ResourceKind kind = *parse_resource_kind(r.at("kind").get<std::string>());
            std::vector<const Item*> mine;
            for (const auto& i : items) {
                if (i.vim == vim && i.kind == kind) {
                    mine.push_back(&i);
                }
            }
            w.send(Message{"AllocateRequest", op.vnfm, vim, 11, op.op_id,
                           {{"reservation_id", r.at("id")}, {"kind", to_string(kind)}, {"items", items_json(mine)}}});
            ++op.pending_allocations;
        }
    } else {
        std::map<std::pair<std::string, int>, std::vector<const Item*>> groups;
        for (const auto& i : items) {
            groups[{i.vim, static_cast<int>(i.kind)}].push_back(&i);
        }
        for (const auto& [key, mine] : groups) {
            CapacityVector total;
            for (const Item* i : mine) {
                total += i->spec;
            }
            w.send(Message{"AllocateRequest", op.vnfm, key.first, 11, op.op_id,
                           {{"spec", capacity_json(total)},
                            {"kind", to_string(mine.front()->kind)},
                            {"items", items_json(mine)}}});
            ++op.pending_allocations;
        }
    }
    if (op.pending_allocations == 0) {
        fail_op(w, op, "nothing to allocate");
    }
}

void on_allocated(World& w, ScalingOperation& op)
{
    attach_vl_handles(w, op);
    const auto adds = vnfc_additions(op);
    if (adds.empty()) {
        begin_release(w, op);
        return;
    }
    const VnfInfo* info = info_of(w, op);
    std::uint64_t next = info ? info->next_vnfc : 1;
    for (const Addition* a : adds) {
        op.new_vnfcs.push_back(op.vnf_instance + "/" + a->vdu + "-" + std::to_string(next++));
    }
    w.send(Message{"ConfigureVnfc", op.vnfm, op.em, 14, op.op_id, {{"instance_ids", op.new_vnfcs}}});
    self_update(w, op, 15, VnfInfoChangeKind::add_instances_stopped, op.new_vnfcs);
}

void record_added(World& w, ScalingOperation& op)
{
    if (!w.repo.vnfs.count(op.vnf_instance)) {
        VnfInfo info;
        info.vnf_instance_id = op.vnf_instance;
        info.vnf_profile_ref = op.plan.profile;
        info.vnfd_ref = op.plan.vnfd;
        info.vnf_flavor_ref = op.plan.vnf_flavor;
        w.repo.vnfs.emplace(op.vnf_instance, std::move(info));
        w.repo.ns.vnf_instance_refs.push_back(op.vnf_instance);
    }
    VnfInfoChange change;
    change.kind = VnfInfoChangeKind::add_instances_stopped;
    const auto adds = vnfc_additions(op);
    for (std::size_t i = 0; i < adds.size(); ++i) {
        VnfcInstance c;
        c.id = op.new_vnfcs[i];
        c.vdu_ref = adds[i]->vdu;
        for (const auto& item : op.allocated) {
            if (item.key != adds[i]->key) {
                continue;
            }
            if (item.kind == ResourceKind::compute) {
                c.compute_handle = item.handle;
                c.zone_ref = item.zone;
            } else if (item.kind == ResourceKind::storage) {
                c.storage_handles.push_back(item.handle);
                if (c.zone_ref.empty()) {
                    c.zone_ref = item.zone;
                }
            }
        }
        change.added.push_back(std::move(c));
    }
    VnfInfo& info = w.repo.vnfs.at(op.vnf_instance);
    if (info.vim_ref.empty() && !change.added.empty()) {
        info.vim_ref = w.repo.resources.pop_of_zone(change.added.front().zone_ref).vim_ref;
    }
    info = record_vnf_info_update(info, change, 15, w.now);
    info.next_vnfc += adds.size();
}

void on_update(World& w, ScalingOperation& op, const Message& m)
{
    const std::string change = m.payload.at("change");
    if (change == to_string(VnfInfoChangeKind::add_instances_stopped)) {
        record_added(w, op);
        w.send(Message{"OperateVnfRequest", op.vnfm, kNfvo, 16, op.op_id,
                       {{"op_id", op.op_id}, {"target_state", "STARTED"}}});
        return;
    }
    if (change == to_string(VnfInfoChangeKind::mark_started)) {
        VnfInfoChange c{VnfInfoChangeKind::mark_started, {}, op.new_vnfcs, {}};
        apply(w, op.vnf_instance, c, 19);
        const bool release_follows = !op.plan.delta.remove.empty() || !vl_release_handles(w, op).empty();
        if (!release_follows && il_pending(w, op)) {
            apply(w, op.vnf_instance, VnfInfoChange{VnfInfoChangeKind::set_vnf_il, {}, {}, op.plan.to_il}, 19);
            op.il_recorded = true;
        }
        if (!vnfd_of(w, op).internal_vlds.empty()) {
            std::vector<Id> peers;
            for (const auto& v : w.repo.vnfs.at(op.vnf_instance).vnfc_instances) {
                if (v.state == VnfcState::started &&
                    std::find(op.new_vnfcs.begin(), op.new_vnfcs.end(), v.id) == op.new_vnfcs.end()) {
                    peers.push_back(v.id);
                }
            }
            if (!peers.empty()) {
                w.send(Message{"AppConfigure", op.vnfm, op.em, 19, op.op_id,
                               {{"instance_ids", peers}, {"reason", "peer-reconfigure"}}});
            }
        }
        begin_release(w, op);
        return;
    }
    if (change == to_string(VnfInfoChangeKind::mark_stopped)) {
        apply(w, op.vnf_instance, VnfInfoChange{VnfInfoChangeKind::mark_stopped, {}, op.removed_vnfcs, {}}, 24);
        send_release_requests(w, op);
        return;
    }
    // step 28
    if (!op.removed_vnfcs.empty()) {
        apply(w, op.vnf_instance, VnfInfoChange{VnfInfoChangeKind::delete_instances, {}, op.removed_vnfcs, {}}, 28);
    }
    if (il_pending(w, op)) {
        apply(w, op.vnf_instance, VnfInfoChange{VnfInfoChangeKind::set_vnf_il, {}, {}, op.plan.to_il}, 28);
        op.il_recorded = true;
    }
    if (op.kind == OpKind::remove_vnf) {
        w.repo.vnfs.erase(op.vnf_instance);
        std::erase(w.repo.ns.vnf_instance_refs, op.vnf_instance);
    }
    complete_op(w, op);
}

} // namespace

void vnfm_handle(World& w, const Message& m)
{
    if (m.name == "VnfIndicatorNotify") {
        w.send(Message{"VnfIndicatorNotify", m.dst, kNfvo, 3, "", m.payload});
        return;
    }
    if (m.op_id.empty()) {
        return;
    }
    ScalingOperation& op = w.op(m.op_id);
    if (op.phase == Phase::failed || op.phase == Phase::completed) {
        return;
    }
    if (m.name == "ScaleVnfToLevelRequest") {
        w.send(Message{"ScaleVnfToLevelResponse", op.vnfm, kNfvo, 5, op.op_id, {{"op_id", op.op_id}}});
        begin(w, op);
    } else if (m.name == "GrantResponse") {
        if (m.step == 20) {
            if (!op.removed_vnfcs.empty()) {
                w.send(Message{"OperateVnfRequest", op.vnfm, kNfvo, 21, op.op_id,
                               {{"op_id", op.op_id}, {"target_state", "STOPPED"}}});
            } else {
                send_release_requests(w, op);
            }
        } else {
            on_allocate_grant(w, op, m);
        }
    } else if (m.name == "AllocateResponse") {
        --op.pending_allocations;
        if (m.payload.contains("error")) {
            if (op.allocation_error.empty()) {
                op.allocation_error = m.payload.at("error").get<std::string>();
            }
        } else {
            for (const auto& h : m.payload.at("handles")) {
                op.allocated.push_back({h.at("key"), h.at("handle"), h.at("zone"),
                                        *parse_resource_kind(h.at("kind").get<std::string>())});
            }
        }
        if (op.pending_allocations > 0) {
            return;
        }
        if (!op.allocation_error.empty()) {
            fail_op(w, op, op.allocation_error);
            return;
        }
        on_allocated(w, op);
    } else if (m.name == "OperateVnfGrant") {
        if (m.step == 17) {
            w.send(Message{"AppConfigure", op.vnfm, op.em, 18, op.op_id,
                           {{"instance_ids", op.new_vnfcs}, {"reason", "start"}}});
            self_update(w, op, 19, VnfInfoChangeKind::mark_started, op.new_vnfcs);
        } else {
            std::vector<Id> targets;
            for (const auto& v : w.repo.vnfs.at(op.vnf_instance).vnfc_instances) {
                if (v.state == VnfcState::started &&
                    std::find(op.removed_vnfcs.begin(), op.removed_vnfcs.end(), v.id) == op.removed_vnfcs.end() &&
                    !vnfd_of(w, op).internal_vlds.empty()) {
                    targets.push_back(v.id);
                }
            }
            targets.insert(targets.end(), op.removed_vnfcs.begin(), op.removed_vnfcs.end());
            w.send(Message{"AppConfigure", op.vnfm, op.em, 23, op.op_id,
                           {{"instance_ids", targets}, {"reason", "stop"}}});
            self_update(w, op, 24, VnfInfoChangeKind::mark_stopped, op.removed_vnfcs);
        }
    } else if (m.name == "VnfInfoUpdate") {
        on_update(w, op, m);
    } else if (m.name == "ReleaseResponse") {
        if (--op.pending_releases == 0) {
            self_update(w, op, 28, VnfInfoChangeKind::delete_instances, op.removed_vnfcs);
        }
    }
}

} // namespace nsscale::sim
