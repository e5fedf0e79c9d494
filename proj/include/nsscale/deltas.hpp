#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "nsscale/capacity.hpp"
#include "nsscale/descriptor.hpp"

namespace nsscale {

struct IlDelta {
    std::map<Id, int> add;    ///< VDU id -> VNFC instances to create
    std::map<Id, int> remove; ///< VDU id -> VNFC instances to delete
    CapacityVector net;

    bool empty() const { return add.empty() && remove.empty(); }
};

/// Per-VNFC requirement of a VDU: (vcpu, memory, sum of VSD storage, 0).
CapacityVector vdu_requirement(const Vnfd& vnfd, const Vdu& vdu);

/// Sum of VDU requirements over a VNF-IL's counts.
CapacityVector vnf_il_capacity(const Vnfd& vnfd, const VnfDeploymentFlavor& flavor, const Id& il_id);

/// Throws UnknownIdError for an IL outside `flavor`.
IlDelta vnf_il_delta(const Vnfd& vnfd, const VnfDeploymentFlavor& flavor, const Id& from_il, const Id& to_il);

enum class ProfileChange { unchanged, il_change, add, remove, mixed };
enum class Procedure { none, vnf_scaling, add_vnf, remove_vnf, mixed };

std::string_view to_string(ProfileChange c);
std::string_view to_string(Procedure p);

struct ProfileDelta {
    Id profile;
    ProfileChange change = ProfileChange::unchanged;
    NsIlVnfEntry from; ///< instance_count 0 when absent
    NsIlVnfEntry to;
    int instances_added = 0;
    int instances_removed = 0;
    /// For il_change: delta applied to every existing instance.
    std::optional<IlDelta> il_delta;
    CapacityVector net;
};

struct VlDelta {
    Id vl_profile;
    double from_bitrate = 0; ///< 0 when absent
    double to_bitrate = 0;
};

struct NsIlDelta {
    Id from;
    Id to;
    std::vector<ProfileDelta> profiles; ///< changed profiles, declaration order
    std::vector<VlDelta> vls;           ///< changed VL profiles, declaration order
    Procedure classification = Procedure::none;
    CapacityVector net;
};

/// Resolves a VNF profile to its VNFD and flavor; throws UnknownIdError.
std::pair<const Vnfd*, const VnfDeploymentFlavor*> resolve_profile(const Catalog& catalog, const VnfProfile& profile);

/// Throws UnknownIdError for an NS-IL outside `flavor`.
NsIlDelta ns_il_delta(const Catalog& catalog, const NsDeploymentFlavor& flavor, const Id& from_il, const Id& to_il);

/// Sum over all VNFC instances implied by the NS-IL plus VL bitrates.
CapacityVector aggregate_capacity(const Catalog& catalog, const NsDeploymentFlavor& flavor, const Id& ns_il);

/// Total VNF instances the NS-IL deploys.
int total_instances(const NsDeploymentFlavor& flavor, const Id& ns_il);

} // namespace nsscale
