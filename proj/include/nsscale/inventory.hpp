#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsscale/capacity.hpp"
#include "nsscale/descriptor.hpp"

namespace nsscale {

struct ResourceZone {
    Id id;
    CapacityVector total;
    CapacityVector allocated;
    CapacityVector reserved;

    CapacityVector available() const { return total - allocated - reserved; }
};

struct NfviPop {
    Id id;
    Id vim_ref;
    std::vector<ResourceZone> zones; ///< ascending id
};

enum class ReservationState { active, consumed, cancelled };
std::string_view to_string(ReservationState s);

struct Reservation {
    Id id;
    Id zone_ref;
    CapacityVector spec;
    ResourceKind kind = ResourceKind::compute;
    ReservationState state = ReservationState::active;
};

struct ResourceHandle {
    Id id;
    Id zone_ref;
    CapacityVector spec;
    ResourceKind kind = ResourceKind::compute;
};

struct ZoneReport {
    Id pop;
    Id vim;
    Id zone;
    CapacityVector total;
    CapacityVector allocated;
    CapacityVector reserved;
    CapacityVector available;
};

/// Zone capacity accounting. Zone ids are unique across all PoPs.
class ResourceInventory {
public:
    ResourceInventory() = default;
    /// Throws ScenarioError on duplicate PoP or zone ids.
    explicit ResourceInventory(std::vector<NfviPop> pops);

    /// Throws InsufficientCapacityError naming the deficient dimension.
    Reservation reserve(const Id& zone, const CapacityVector& spec, ResourceKind kind);

    /// Unreserved path when `from_reservation` is empty.
    ResourceHandle allocate(const Id& zone, const CapacityVector& spec, ResourceKind kind,
                            const std::optional<Id>& from_reservation = std::nullopt);

    /// Consumes the reservation once for several handles; the specs must sum
    /// to at most the reservation spec. The remainder returns to available.
    std::vector<ResourceHandle> allocate_from_reservation(const Id& reservation, const std::vector<CapacityVector>& specs);

    void cancel(const Id& reservation);
    /// Throws StateError on a double release, UnknownIdError on an unknown handle.
    void release(const Id& handle);

    std::vector<ZoneReport> capacity_report() const;

    const std::vector<NfviPop>& pops() const { return pops_; }
    const ResourceZone& zone(const Id& id) const;
    const NfviPop& pop_of_zone(const Id& zone) const;
    const NfviPop& pop(const Id& id) const;
    CapacityVector pop_available(const Id& pop) const;

    const std::map<Id, Reservation>& reservations() const { return reservations_; }
    const std::map<Id, ResourceHandle>& handles() const { return handles_; }
    const ResourceHandle& handle(const Id& id) const;
    const Reservation& reservation(const Id& id) const;

private:
    ResourceZone& zone_mut(const Id& id);
    Reservation& active_reservation(const Id& id);

    std::vector<NfviPop> pops_;
    std::map<Id, std::pair<std::size_t, std::size_t>> zone_index_;
    std::map<Id, Reservation> reservations_;
    std::map<Id, ResourceHandle> handles_;   ///< outstanding only
    std::map<Id, bool> released_;
    std::uint64_t next_reservation_ = 1;
    std::uint64_t next_handle_ = 1;
};

/// Checks that no zone goes negative and allocated+reserved <= total.
bool zone_consistent(const ResourceZone& z, double tolerance = kCapacityTolerance);

/// vim_placement: first zone (ascending id, skipping `excluded`) whose
/// available capacity fits `spec`; nullopt when none fits.
std::optional<Id> first_fit_zone(const std::vector<const ResourceZone*>& zones, const CapacityVector& spec,
                                 const std::vector<Id>& excluded = {});

enum class VnfcState { stopped, started };
std::string_view to_string(VnfcState s);

struct VnfcInstance {
    Id id;
    Id vdu_ref;
    VnfcState state = VnfcState::stopped;
    std::optional<Id> compute_handle;
    std::vector<Id> storage_handles;
    Id zone_ref;
};

enum class VnfInfoChangeKind { add_instances_stopped, mark_started, mark_stopped, delete_instances, set_vnf_il };
std::string_view to_string(VnfInfoChangeKind k);

struct VnfInfoChange {
    VnfInfoChangeKind kind = VnfInfoChangeKind::add_instances_stopped;
    std::vector<VnfcInstance> added;  ///< add_instances_stopped
    std::vector<Id> instance_ids;     ///< mark_started, mark_stopped, delete_instances
    Id vnf_il;                        ///< set_vnf_il
};

struct AuditEntry {
    int revision = 0;
    std::optional<int> step; ///< 15, 19, 24 or 28; empty for instantiation
    Tick tick = 0;
    VnfInfoChangeKind change = VnfInfoChangeKind::add_instances_stopped;
    std::vector<Id> instances;
};

struct VnfInfo {
    Id vnf_instance_id;
    Id vnf_profile_ref;
    Id vnfd_ref;
    Id vnf_flavor_ref;
    Id current_vnf_il; ///< empty until the first set_vnf_il
    std::vector<VnfcInstance> vnfc_instances;
    Id vim_ref;
    int revision = 0;
    std::vector<AuditEntry> audit; ///< one entry per revision
    std::uint64_t next_vnfc = 1;

    const VnfcInstance* find_vnfc(const Id& id) const;
    /// VDU id -> number of STARTED VNFC instances.
    std::map<Id, int> started_counts() const;
};

/// Returns the next revision of `info`. Throws StateError on an illegal
/// VNFC transition (e.g. deleting a STARTED instance).
VnfInfo record_vnf_info_update(const VnfInfo& info, const VnfInfoChange& change, std::optional<int> step, Tick tick);

enum class NsState { instantiated, scaling, terminated };
std::string_view to_string(NsState s);

struct NsInfo {
    Id ns_instance_id;
    Id nsd_ref;
    Id flavor_ref;
    Id current_ns_il;
    std::vector<Id> vnf_instance_refs;
    std::vector<Id> vl_instance_refs;
    NsState state = NsState::instantiated;
    bool blocked = false; ///< set after a failed operation
};

struct VlInstance {
    Id id;
    Id vl_profile_ref;
    double bitrate = 0.0;
    std::vector<Id> bandwidth_handles; ///< allocation order
};

/// All runtime repositories.
struct Repository {
    ResourceInventory resources;
    NsInfo ns;
    std::map<Id, VnfInfo> vnfs;
    std::map<Id, VlInstance> vls;
    std::map<Id, int> next_vnf_index; ///< per VNF profile

    /// VNF instances of a profile, creation order.
    std::vector<const VnfInfo*> instances_of(const Id& profile) const;
    Id new_vnf_instance_id(const Id& profile);
};

nlohmann::json to_json(const Repository& repo);
nlohmann::json to_json(const VnfInfo& info);
nlohmann::json to_json(const std::vector<ZoneReport>& report);

} // namespace nsscale
