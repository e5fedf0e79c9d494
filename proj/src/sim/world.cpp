#include "nsscale/sim/world.hpp"

#include <algorithm>

#include "nsscale/deltas.hpp"

namespace nsscale::sim {

std::string_view to_string(Phase p)
{
    switch (p) {
    case Phase::collecting:
        return "collecting";
    case Phase::triggered:
        return "triggered";
    case Phase::allocating:
        return "allocating";
    case Phase::releasing:
        return "releasing";
    case Phase::completed:
        return "completed";
    case Phase::failed:
        return "failed";
    }
    return "?";
}

nlohmann::json capacity_json(const CapacityVector& c)
{
    nlohmann::json j;
    to_json(j, c);
    return j;
}

namespace {

std::vector<const ResourceZone*> all_zones(const ResourceInventory& inv)
{
    std::vector<const ResourceZone*> out;
    for (const auto& p : inv.pops()) {
        for (const auto& z : p.zones) {
            out.push_back(&z);
        }
    }
    return out;
}

} // namespace

World::World(const Scenario& sc, bool reservation)
    : scenario(sc),
      catalog(sc.catalog),
      nsd(sc.nsd()),
      flavor(sc.flavor()),
      reservation_enabled(reservation),
      ingestor(sc.thresholds,
               [this](const Id& subject, const std::string& name) -> Tick {
                   const auto vnfd = vnfd_of_instance(subject);
                   for (const auto& item : nsd.monitored_info) {
                       if (item.name != name) {
                           continue;
                       }
                       const bool ns_match = item.source == MonitoredSource::ns_metric &&
                                             subject == repo.ns.ns_instance_id;
                       if (ns_match || (vnfd && item.subject == *vnfd)) {
                           return std::max<Tick>(1, item.collection_period);
                       }
                   }
                   return 1;
               }),
      engine(sc.nsd(), sc.metric_dimensions, [this](const MonitoredInfoItem& item) {
          std::vector<Id> out;
          if (item.source == MonitoredSource::ns_metric || item.subject == kNsSelf) {
              out.push_back(repo.ns.ns_instance_id);
              return out;
          }
          for (const auto& id : repo.ns.vnf_instance_refs) {
              auto it = repo.vnfs.find(id);
              if (it != repo.vnfs.end() && it->second.vnfd_ref == item.subject) {
                  out.push_back(id);
              }
          }
          return out;
      })
{
    repo.resources = ResourceInventory(sc.topology.pops);
    repo.ns.ns_instance_id = sc.initial.ns_instance_id;
    repo.ns.nsd_ref = sc.initial.nsd_ref;
    repo.ns.flavor_ref = sc.initial.flavor_ref;
    repo.ns.current_ns_il = sc.initial.ns_il;
    instantiate();
}

void World::instantiate()
{
    const NsInstantiationLevel* il = flavor.find_ns_il(scenario.initial.ns_il);
    if (!il) {
        throw ScenarioError("initial NS-IL '" + scenario.initial.ns_il + "' is not in flavor '" + flavor.id + "'");
    }
    auto place = [&](const CapacityVector& spec, const std::string& what) {
        auto zone = first_fit_zone(all_zones(repo.resources), spec);
        if (!zone) {
            throw ScenarioError("initial instantiation does not fit: " + what);
        }
        return *zone;
    };

    for (const auto& profile : flavor.vnf_profiles) {
        auto entry = il->vnf_entries.find(profile.id);
        if (entry == il->vnf_entries.end()) {
            continue;
        }
        const auto [vnfd, vf] = resolve_profile(catalog, profile);
        const VnfInstantiationLevel* vil = vf->find_il(entry->second.vnf_il_ref);
        if (!vil) {
            throw UnknownIdError("VNF-IL", entry->second.vnf_il_ref);
        }
        for (int n = 0; n < entry->second.instance_count; ++n) {
            VnfInfo info;
            info.vnf_instance_id = repo.new_vnf_instance_id(profile.id);
            info.vnf_profile_ref = profile.id;
            info.vnfd_ref = vnfd->id;
            info.vnf_flavor_ref = vf->id;

            VnfInfoChange add;
            add.kind = VnfInfoChangeKind::add_instances_stopped;
            for (const auto& [vdu_id, count] : vil->counts) {
                const Vdu* vdu = vnfd->find_vdu(vdu_id);
                if (!vdu) {
                    throw UnknownIdError("VDU", vdu_id);
                }
                const CapacityVector spec = vdu_requirement(*vnfd, *vdu);
                for (int k = 0; k < count; ++k) {
                    VnfcInstance c;
                    c.id = info.vnf_instance_id + "/" + vdu_id + "-" + std::to_string(info.next_vnfc++);
                    c.vdu_ref = vdu_id;
                    c.zone_ref = place(spec, c.id);
                    c.compute_handle =
                        repo.resources.allocate(c.zone_ref, restrict_to(spec, ResourceKind::compute), ResourceKind::compute)
                            .id;
                    if (spec.storage > 0) {
                        c.storage_handles.push_back(
                            repo.resources
                                .allocate(c.zone_ref, restrict_to(spec, ResourceKind::storage), ResourceKind::storage)
                                .id);
                    }
                    add.added.push_back(std::move(c));
                }
            }
            if (!add.added.empty()) {
                info.vim_ref = repo.resources.pop_of_zone(add.added.front().zone_ref).vim_ref;
            }
            VnfInfoChange start;
            start.kind = VnfInfoChangeKind::mark_started;
            for (const auto& c : add.added) {
                start.instance_ids.push_back(c.id);
            }
            VnfInfoChange level;
            level.kind = VnfInfoChangeKind::set_vnf_il;
            level.vnf_il = vil->id;

            info = record_vnf_info_update(info, add, std::nullopt, 0);
            info = record_vnf_info_update(info, start, std::nullopt, 0);
            info = record_vnf_info_update(info, level, std::nullopt, 0);
            repo.ns.vnf_instance_refs.push_back(info.vnf_instance_id);
            repo.vnfs.emplace(info.vnf_instance_id, std::move(info));
        }
    }

    for (const auto& vlp : flavor.vl_profiles) {
        auto entry = il->vl_entries.find(vlp.id);
        if (entry == il->vl_entries.end() || entry->second <= 0) {
            continue;
        }
        VlInstance vl;
        vl.id = repo.ns.ns_instance_id + "/" + vlp.id;
        vl.vl_profile_ref = vlp.id;
        vl.bitrate = entry->second;
        CapacityVector spec;
        spec.bandwidth = entry->second;
        vl.bandwidth_handles.push_back(
            repo.resources.allocate(place(spec, vl.id), spec, ResourceKind::network).id);
        repo.ns.vl_instance_refs.push_back(vl.id);
        repo.vls.emplace(vl.id, std::move(vl));
    }
}

void World::send(Message m)
{
    check_message(m);
    if (!m.op_id.empty()) {
        ++in_flight_[m.op_id];
    }
    queue_.push(Queued{now + 1, send_order_++, std::move(m)});
}

std::optional<Message> World::pop_due(Tick tick)
{
    if (queue_.empty() || queue_.top().deliver != tick) {
        return std::nullopt;
    }
    Message m = queue_.top().msg;
    queue_.pop();
    if (!m.op_id.empty()) {
        --in_flight_[m.op_id];
    }
    return m;
}

int World::in_flight(const Id& op_id) const
{
    auto it = in_flight_.find(op_id);
    return it == in_flight_.end() ? 0 : it->second;
}

std::string World::vnfm_for_vnfd(const Id& vnfd) const
{
    auto it = scenario.topology.vnfm_assignment.find(vnfd);
    return "VNFM-" + std::to_string(it == scenario.topology.vnfm_assignment.end() ? 0 : it->second);
}

std::string World::em_for_vnfd(const Id& vnfd) const
{
    auto it = scenario.topology.em_assignment.find(vnfd);
    return "EM-" + std::to_string(it == scenario.topology.em_assignment.end() ? 0 : it->second);
}

std::string World::vim_actor(const Id& vim_ref) const
{
    const auto& vims = scenario.topology.vims;
    auto it = std::find(vims.begin(), vims.end(), vim_ref);
    if (it == vims.end()) {
        throw UnknownIdError("VIM", vim_ref);
    }
    return "VIM-" + std::to_string(it - vims.begin());
}

Id World::vim_ref_of(const std::string& actor) const
{
    const std::size_t i = std::stoul(actor.substr(actor.find('-') + 1));
    return scenario.topology.vims.at(i);
}

std::optional<Id> World::vnfd_of_instance(const Id& vnf_instance) const
{
    auto it = repo.vnfs.find(vnf_instance);
    if (it == repo.vnfs.end()) {
        return std::nullopt;
    }
    return it->second.vnfd_ref;
}

ScalingOperation& World::op(const Id& op_id)
{
    auto it = ops.find(op_id);
    if (it == ops.end()) {
        throw StateError("unknown operation '" + op_id + "'");
    }
    return it->second;
}

ScalingOperation* World::current_op()
{
    if (op_order.empty()) {
        return nullptr;
    }
    ScalingOperation& o = ops.at(op_order.back());
    return o.phase == Phase::completed || o.phase == Phase::failed ? nullptr : &o;
}

DrpaContext World::drpa_context() const
{
    DrpaContext ctx;
    ctx.catalog = &catalog;
    ctx.flavor = &flavor;
    ctx.state = snapshot_of(repo);
    ctx.capacity = pop_capacities(repo.resources);
    ctx.constraints = scenario.options.constraints;
    return ctx;
}

void World::log_step(const Message& m)
{
    if (m.op_id.empty() || !m.step || *m.step < 5) {
        return;
    }
    auto it = ops.find(m.op_id);
    if (it == ops.end()) {
        return;
    }
    ScalingOperation& o = it->second;
    const int s = *m.step;
    o.step_log.emplace_back(s, now);
    if (o.phase == Phase::failed || o.phase == Phase::completed) {
        return;
    }
    if (s >= 6 && s <= 10) {
        o.phase = Phase::allocating;
        o.sub_phase = "reservation";
    } else if (s >= 11 && s <= 15) {
        o.phase = Phase::allocating;
        o.sub_phase = "creation";
    } else if (s >= 16 && s <= 19) {
        o.phase = Phase::allocating;
        o.sub_phase = "starting";
    } else if (s >= 20 && s <= 24) {
        o.phase = Phase::releasing;
        o.sub_phase = "stopping";
    } else if (s >= 25) {
        o.phase = Phase::releasing;
        o.sub_phase = "deletion";
    }
}

void rollback_allocations(World& w, ScalingOperation& op)
{
    for (const auto& item : op.allocated) {
        if (w.repo.resources.handles().count(item.handle)) {
            w.repo.resources.release(item.handle);
        }
    }
    op.allocated.clear();
    for (const auto& r : op.reservations) {
        const Id id = r.at("id").get<Id>();
        auto it = w.repo.resources.reservations().find(id);
        if (it != w.repo.resources.reservations().end() && it->second.state == ReservationState::active) {
            w.repo.resources.cancel(id);
        }
    }
}

void attach_vl_handles(World& w, ScalingOperation& op)
{
    for (const auto& item : op.allocated) {
        if (item.kind != ResourceKind::network || item.key.rfind("vl/", 0) != 0) {
            continue;
        }
        const Id profile = item.key.substr(3);
        const Id vl_id = w.repo.ns.ns_instance_id + "/" + profile;
        auto it = w.repo.vls.find(vl_id);
        if (it == w.repo.vls.end()) {
            VlInstance vl;
            vl.id = vl_id;
            vl.vl_profile_ref = profile;
            it = w.repo.vls.emplace(vl_id, std::move(vl)).first;
            w.repo.ns.vl_instance_refs.push_back(vl_id);
        }
        it->second.bandwidth_handles.push_back(item.handle);
    }
}

std::vector<Id> vl_release_handles(const World& w, const ScalingOperation& op)
{
    std::vector<Id> out;
    for (const auto& c : op.plan.vl_changes) {
        if (c.release_count == 0 || c.vl_instance.empty()) {
            continue;
        }
        const VlInstance& vl = w.repo.vls.at(c.vl_instance);
        // Newly attached top-up handles sit at the end; skip them.
        std::size_t end = vl.bandwidth_handles.size();
        for (const auto& item : op.allocated) {
            if (item.key == "vl/" + c.vl_profile) {
                --end;
            }
        }
        for (std::size_t k = 0; k < c.release_count && k < end; ++k) {
            out.push_back(vl.bandwidth_handles[end - 1 - k]);
        }
    }
    return out;
}

std::map<std::string, std::vector<Id>> handles_by_vim(const World& w, const std::vector<Id>& handles)
{
    std::map<std::string, std::vector<Id>> out;
    for (const auto& h : handles) {
        const ResourceHandle& rh = w.repo.resources.handle(h);
        out[w.vim_actor(w.repo.resources.pop_of_zone(rh.zone_ref).vim_ref)].push_back(h);
    }
    return out;
}

namespace {

void finalize_vl_changes(World& w, ScalingOperation& op)
{
    for (const auto& c : op.plan.vl_changes) {
        const Id vl_id = c.vl_instance.empty() ? w.repo.ns.ns_instance_id + "/" + c.vl_profile : c.vl_instance;
        auto it = w.repo.vls.find(vl_id);
        if (it == w.repo.vls.end()) {
            continue;
        }
        auto& handles = it->second.bandwidth_handles;
        std::erase_if(handles, [&](const Id& h) { return !w.repo.resources.handles().count(h); });
        it->second.bitrate = c.to_bitrate;
        if (handles.empty() && c.to_bitrate <= 0) {
            std::erase(w.repo.ns.vl_instance_refs, vl_id);
            w.repo.vls.erase(it);
        }
    }
}

void close_op(World& w, ScalingOperation& op)
{
    op.closing = true;
    settle_op(w, op.op_id);
}

} // namespace

void complete_op(World& w, ScalingOperation& op)
{
    finalize_vl_changes(w, op);
    op.phase = Phase::completed;
    op.sub_phase.clear();
    close_op(w, op);
}

void fail_op(World& w, ScalingOperation& op, const std::string& reason)
{
    rollback_allocations(w, op);
    op.phase = Phase::failed;
    op.failure = reason;
    w.repo.ns.blocked = true;
    ++w.failed_ops;
    close_op(w, op);
}

void settle_op(World& w, const Id& op_id)
{
    auto it = w.ops.find(op_id);
    if (it == w.ops.end() || !it->second.closing || w.in_flight(op_id) > 0) {
        return;
    }
    ScalingOperation& op = it->second;
    op.closing = false;
    op.closed_after = w.trace.size();
    if (op.phase == Phase::completed) {
        nfvo_on_op_complete(w, op_id);
    } else {
        nfvo_on_op_failed(w, op_id, op.failure);
    }
}

} // namespace nsscale::sim
