#include "nsscale/inventory.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nsscale/errors.hpp"

namespace nsscale {

using nlohmann::json;

namespace {

void check_kind(const CapacityVector& spec, ResourceKind kind)
{
    if (!(restrict_to(spec, kind) == spec)) {
        throw StateError("spec has capacity outside the " + std::string(to_string(kind)) + " dimensions");
    }
    if (!spec.is_nonnegative()) {
        throw StateError("spec must be non-negative");
    }
}

void require_fits(const CapacityVector& spec, const CapacityVector& bound, const std::string& what)
{
    if (auto d = spec.first_excess(bound, kCapacityTolerance)) {
        std::ostringstream os;
        os << what << ": " << to_string(*d) << " requested " << spec[*d] << ", available " << bound[*d];
        throw InsufficientCapacityError(*d, os.str());
    }
}

/// Snaps tiny negative residues from floating subtraction back to zero.
void clamp(CapacityVector& c)
{
    for (auto d : kAllDimensions) {
        if (c[d] < 0 && c[d] > -kCapacityTolerance) {
            c[d] = 0;
        }
    }
}

} // namespace

std::string_view to_string(ReservationState s)
{
    switch (s) {
    case ReservationState::active: return "active";
    case ReservationState::consumed: return "consumed";
    case ReservationState::cancelled: return "cancelled";
    }
    return "?";
}

std::string_view to_string(VnfcState s) { return s == VnfcState::started ? "STARTED" : "STOPPED"; }

std::string_view to_string(VnfInfoChangeKind k)
{
    switch (k) {
    case VnfInfoChangeKind::add_instances_stopped: return "add-instances-stopped";
    case VnfInfoChangeKind::mark_started: return "mark-started";
    case VnfInfoChangeKind::mark_stopped: return "mark-stopped";
    case VnfInfoChangeKind::delete_instances: return "delete-instances";
    case VnfInfoChangeKind::set_vnf_il: return "set-vnf-il";
    }
    return "?";
}

std::string_view to_string(NsState s)
{
    switch (s) {
    case NsState::instantiated: return "instantiated";
    case NsState::scaling: return "scaling";
    case NsState::terminated: return "terminated";
    }
    return "?";
}

ResourceInventory::ResourceInventory(std::vector<NfviPop> pops) : pops_(std::move(pops))
{
    std::sort(pops_.begin(), pops_.end(), [](const NfviPop& a, const NfviPop& b) { return a.id < b.id; });
    std::set<Id> pop_ids;
    for (std::size_t p = 0; p < pops_.size(); ++p) {
        if (!pop_ids.insert(pops_[p].id).second) {
            throw ScenarioError("duplicate PoP id '" + pops_[p].id + "'");
        }
        auto& zones = pops_[p].zones;
        std::sort(zones.begin(), zones.end(), [](const ResourceZone& a, const ResourceZone& b) { return a.id < b.id; });
        for (std::size_t z = 0; z < zones.size(); ++z) {
            if (!zone_index_.emplace(zones[z].id, std::make_pair(p, z)).second) {
                throw ScenarioError("duplicate zone id '" + zones[z].id + "'");
            }
            if (!zones[z].total.is_nonnegative()) {
                throw ScenarioError("zone '" + zones[z].id + "' has a negative total");
            }
        }
    }
}

ResourceZone& ResourceInventory::zone_mut(const Id& id)
{
    auto it = zone_index_.find(id);
    if (it == zone_index_.end()) {
        throw UnknownIdError("zone", id);
    }
    return pops_[it->second.first].zones[it->second.second];
}

const ResourceZone& ResourceInventory::zone(const Id& id) const
{
    return const_cast<ResourceInventory*>(this)->zone_mut(id);
}

const NfviPop& ResourceInventory::pop_of_zone(const Id& zone) const
{
    auto it = zone_index_.find(zone);
    if (it == zone_index_.end()) {
        throw UnknownIdError("zone", zone);
    }
    return pops_[it->second.first];
}

const NfviPop& ResourceInventory::pop(const Id& id) const
{
    for (const auto& p : pops_) {
        if (p.id == id) {
            return p;
        }
    }
    throw UnknownIdError("PoP", id);
}

CapacityVector ResourceInventory::pop_available(const Id& pop_id) const
{
    CapacityVector sum;
    for (const auto& z : pop(pop_id).zones) {
        sum += z.available();
    }
    return sum;
}

Reservation& ResourceInventory::active_reservation(const Id& id)
{
    auto it = reservations_.find(id);
    if (it == reservations_.end()) {
        throw UnknownIdError("reservation", id);
    }
    if (it->second.state != ReservationState::active) {
        throw StateError("reservation '" + id + "' is " + std::string(to_string(it->second.state)));
    }
    return it->second;
}

const ResourceHandle& ResourceInventory::handle(const Id& id) const
{
    auto it = handles_.find(id);
    if (it == handles_.end()) {
        throw UnknownIdError("handle", id);
    }
    return it->second;
}

const Reservation& ResourceInventory::reservation(const Id& id) const
{
    auto it = reservations_.find(id);
    if (it == reservations_.end()) {
        throw UnknownIdError("reservation", id);
    }
    return it->second;
}

Reservation ResourceInventory::reserve(const Id& zone_id, const CapacityVector& spec, ResourceKind kind)
{
    check_kind(spec, kind);
    ResourceZone& z = zone_mut(zone_id);
    require_fits(spec, z.available(), "reserve in " + zone_id);
    z.reserved += spec;
    Reservation r{"res-" + std::to_string(next_reservation_++), zone_id, spec, kind, ReservationState::active};
    reservations_.emplace(r.id, r);
    return r;
}

ResourceHandle ResourceInventory::allocate(const Id& zone_id, const CapacityVector& spec, ResourceKind kind,
                                           const std::optional<Id>& from_reservation)
{
    if (from_reservation) {
        const Reservation& r = reservation(*from_reservation);
        if (r.zone_ref != zone_id) {
            throw StateError("reservation '" + r.id + "' belongs to zone " + r.zone_ref);
        }
        if (r.kind != kind) {
            throw StateError("reservation '" + r.id + "' is of kind " + std::string(to_string(r.kind)));
        }
        return allocate_from_reservation(*from_reservation, {spec}).front();
    }
    check_kind(spec, kind);
    ResourceZone& z = zone_mut(zone_id);
    require_fits(spec, z.available(), "allocate in " + zone_id);
    z.allocated += spec;
    ResourceHandle h{"h-" + std::to_string(next_handle_++), zone_id, spec, kind};
    handles_.emplace(h.id, h);
    return h;
}

std::vector<ResourceHandle> ResourceInventory::allocate_from_reservation(const Id& reservation_id,
                                                                         const std::vector<CapacityVector>& specs)
{
    Reservation& r = active_reservation(reservation_id);
    CapacityVector sum;
    for (const auto& s : specs) {
        check_kind(s, r.kind);
        sum += s;
    }
    require_fits(sum, r.spec, "allocate from " + reservation_id);
    ResourceZone& z = zone_mut(r.zone_ref);
    z.reserved -= r.spec;
    clamp(z.reserved);
    z.allocated += sum;
    r.state = ReservationState::consumed;
    std::vector<ResourceHandle> out;
    for (const auto& s : specs) {
        ResourceHandle h{"h-" + std::to_string(next_handle_++), r.zone_ref, s, r.kind};
        handles_.emplace(h.id, h);
        out.push_back(h);
    }
    return out;
}

void ResourceInventory::cancel(const Id& reservation_id)
{
    Reservation& r = active_reservation(reservation_id);
    ResourceZone& z = zone_mut(r.zone_ref);
    z.reserved -= r.spec;
    clamp(z.reserved);
    r.state = ReservationState::cancelled;
}

void ResourceInventory::release(const Id& handle_id)
{
    auto it = handles_.find(handle_id);
    if (it == handles_.end()) {
        if (released_.count(handle_id)) {
            throw StateError("handle '" + handle_id + "' already released");
        }
        throw UnknownIdError("handle", handle_id);
    }
    ResourceZone& z = zone_mut(it->second.zone_ref);
    z.allocated -= it->second.spec;
    clamp(z.allocated);
    released_[handle_id] = true;
    handles_.erase(it);
}

std::vector<ZoneReport> ResourceInventory::capacity_report() const
{
    std::vector<ZoneReport> out;
    for (const auto& p : pops_) {
        for (const auto& z : p.zones) {
            out.push_back({p.id, p.vim_ref, z.id, z.total, z.allocated, z.reserved, z.available()});
        }
    }
    return out;
}

bool zone_consistent(const ResourceZone& z, double tolerance)
{
    const CapacityVector avail = z.available();
    for (auto d : kAllDimensions) {
        if (z.allocated[d] < -tolerance || z.reserved[d] < -tolerance || avail[d] < -tolerance) {
            return false;
        }
    }
    return true;
}

std::optional<Id> first_fit_zone(const std::vector<const ResourceZone*>& zones, const CapacityVector& spec,
                                 const std::vector<Id>& excluded)
{
    std::vector<const ResourceZone*> sorted = zones;
    std::sort(sorted.begin(), sorted.end(), [](const ResourceZone* a, const ResourceZone* b) { return a->id < b->id; });
    for (const ResourceZone* z : sorted) {
        if (std::find(excluded.begin(), excluded.end(), z->id) != excluded.end()) {
            continue;
        }
        if (spec.fits_within(z->available(), kCapacityTolerance)) {
            return z->id;
        }
    }
    return std::nullopt;
}

const VnfcInstance* VnfInfo::find_vnfc(const Id& id) const
{
    for (const auto& c : vnfc_instances) {
        if (c.id == id) {
            return &c;
        }
    }
    return nullptr;
}

std::map<Id, int> VnfInfo::started_counts() const
{
    std::map<Id, int> out;
    for (const auto& c : vnfc_instances) {
        if (c.state == VnfcState::started) {
            ++out[c.vdu_ref];
        }
    }
    return out;
}

VnfInfo record_vnf_info_update(const VnfInfo& info, const VnfInfoChange& change, std::optional<int> step, Tick tick)
{
    VnfInfo next = info;
    AuditEntry entry;
    entry.step = step;
    entry.tick = tick;
    entry.change = change.kind;

    auto find_mut = [&](const Id& id) -> VnfcInstance& {
        for (auto& c : next.vnfc_instances) {
            if (c.id == id) {
                return c;
            }
        }
        throw StateError("VNFC instance '" + id + "' not found in " + info.vnf_instance_id);
    };

    switch (change.kind) {
    case VnfInfoChangeKind::add_instances_stopped:
        for (auto c : change.added) {
            if (next.find_vnfc(c.id)) {
                throw StateError("VNFC instance '" + c.id + "' already exists");
            }
            for (const auto& past : info.audit) {
                if (past.change == VnfInfoChangeKind::delete_instances &&
                    std::find(past.instances.begin(), past.instances.end(), c.id) != past.instances.end()) {
                    throw StateError("VNFC instance id '" + c.id + "' was deleted and cannot be reused");
                }
            }
            c.state = VnfcState::stopped;
            entry.instances.push_back(c.id);
            next.vnfc_instances.push_back(std::move(c));
        }
        break;
    case VnfInfoChangeKind::mark_started:
        for (const auto& id : change.instance_ids) {
            VnfcInstance& c = find_mut(id);
            if (c.state != VnfcState::stopped) {
                throw StateError("VNFC instance '" + id + "' is not STOPPED");
            }
            c.state = VnfcState::started;
            entry.instances.push_back(id);
        }
        break;
    case VnfInfoChangeKind::mark_stopped:
        for (const auto& id : change.instance_ids) {
            VnfcInstance& c = find_mut(id);
            if (c.state != VnfcState::started) {
                throw StateError("VNFC instance '" + id + "' is not STARTED");
            }
            c.state = VnfcState::stopped;
            entry.instances.push_back(id);
        }
        break;
    case VnfInfoChangeKind::delete_instances:
        for (const auto& id : change.instance_ids) {
            if (find_mut(id).state != VnfcState::stopped) {
                throw StateError("cannot delete STARTED VNFC instance '" + id + "'");
            }
            std::erase_if(next.vnfc_instances, [&](const VnfcInstance& c) { return c.id == id; });
            entry.instances.push_back(id);
        }
        break;
    case VnfInfoChangeKind::set_vnf_il:
        next.current_vnf_il = change.vnf_il;
        break;
    }
    next.revision = info.revision + 1;
    entry.revision = next.revision;
    next.audit.push_back(std::move(entry));
    return next;
}

std::vector<const VnfInfo*> Repository::instances_of(const Id& profile) const
{
    std::vector<const VnfInfo*> out;
    for (const auto& id : ns.vnf_instance_refs) {
        auto it = vnfs.find(id);
        if (it != vnfs.end() && it->second.vnf_profile_ref == profile) {
            out.push_back(&it->second);
        }
    }
    return out;
}

Id Repository::new_vnf_instance_id(const Id& profile)
{
    int& next = next_vnf_index[profile];
    if (next == 0) {
        next = 1;
    }
    return profile + "-" + std::to_string(next++);
}

json to_json(const VnfInfo& info)
{
    json vnfcs = json::array();
    for (const auto& c : info.vnfc_instances) {
        json storage = json::array();
        for (const auto& h : c.storage_handles) {
            storage.push_back(h);
        }
        vnfcs.push_back({{"id", c.id},
                         {"vdu_ref", c.vdu_ref},
                         {"state", to_string(c.state)},
                         {"compute_handle", c.compute_handle ? json(*c.compute_handle) : json(nullptr)},
                         {"storage_handles", storage},
                         {"zone_ref", c.zone_ref}});
    }
    json audit = json::array();
    for (const auto& a : info.audit) {
        audit.push_back({{"revision", a.revision},
                         {"step", a.step ? json(*a.step) : json("instantiation")},
                         {"tick", a.tick},
                         {"change", to_string(a.change)},
                         {"instances", a.instances}});
    }
    return {{"vnf_instance_id", info.vnf_instance_id},
            {"vnf_profile_ref", info.vnf_profile_ref},
            {"vnfd_ref", info.vnfd_ref},
            {"vnf_flavor_ref", info.vnf_flavor_ref},
            {"current_vnf_il", info.current_vnf_il},
            {"vim_ref", info.vim_ref},
            {"revision", info.revision},
            {"vnfc_instances", vnfcs},
            {"audit", audit}};
}

json to_json(const std::vector<ZoneReport>& report)
{
    json out = json::array();
    for (const auto& z : report) {
        out.push_back({{"pop", z.pop},
                       {"vim", z.vim},
                       {"zone", z.zone},
                       {"total", z.total},
                       {"allocated", z.allocated},
                       {"reserved", z.reserved},
                       {"available", z.available}});
    }
    return out;
}

json to_json(const Repository& repo)
{
    json vnfs = json::object();
    for (const auto& [id, info] : repo.vnfs) {
        vnfs[id] = to_json(info);
    }
    json vls = json::object();
    for (const auto& [id, vl] : repo.vls) {
        vls[id] = {{"vl_profile_ref", vl.vl_profile_ref},
                   {"bitrate", vl.bitrate},
                   {"bandwidth_handles", vl.bandwidth_handles}};
    }
    json reservations = json::object();
    for (const auto& [id, r] : repo.resources.reservations()) {
        reservations[id] = {{"zone_ref", r.zone_ref},
                            {"spec", r.spec},
                            {"kind", to_string(r.kind)},
                            {"state", to_string(r.state)}};
    }
    json handles = json::object();
    for (const auto& [id, h] : repo.resources.handles()) {
        handles[id] = {{"zone_ref", h.zone_ref}, {"spec", h.spec}, {"kind", to_string(h.kind)}};
    }
    const NsInfo& ns = repo.ns;
    return {{"ns", {{"ns_instance_id", ns.ns_instance_id},
                    {"nsd_ref", ns.nsd_ref},
                    {"flavor_ref", ns.flavor_ref},
                    {"current_ns_il", ns.current_ns_il},
                    {"vnf_instance_refs", ns.vnf_instance_refs},
                    {"vl_instance_refs", ns.vl_instance_refs},
                    {"state", to_string(ns.state)},
                    {"blocked", ns.blocked}}},
            {"vnfs", vnfs},
            {"vls", vls},
            {"zones", to_json(repo.resources.capacity_report())},
            {"reservations", reservations},
            {"handles", handles}};
}

} // namespace nsscale
