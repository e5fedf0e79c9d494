#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsscale/capacity.hpp"
#include "nsscale/deltas.hpp"
#include "nsscale/descriptor.hpp"
#include "nsscale/inventory.hpp"

namespace nsscale {

struct InstanceSnapshot {
    Id id;
    Id profile;
    Id vnf_il;
    std::set<Id> pops; ///< PoPs hosting its VNFC instances
};

struct VlSnapshot {
    Id id;
    Id profile;
    double bitrate = 0.0;
    std::vector<double> handle_bitrates; ///< allocation order
};

/// The parts of the repositories the DRPA and the planner read.
struct NsSnapshot {
    Id current_ns_il;
    std::vector<InstanceSnapshot> instances; ///< creation order
    std::vector<VlSnapshot> vls;
};

NsSnapshot snapshot_of(const Repository& repo);

/// One new resource the target level needs: a VNFC instance or a VL
/// bandwidth increment.
struct Addition {
    enum class Kind { vnfc, vl };

    Kind kind = Kind::vnfc;
    std::string key;   ///< <instance>/<vdu>#k, <profile>+n/<vdu>#k or vl/<vl-profile>
    std::string owner; ///< instance id or <profile>+n; empty for VLs
    Id profile;        ///< VNF or VL profile
    Id vdu;
    CapacityVector spec;
    std::optional<std::string> anti_affinity;
};

struct VlChange {
    Id vl_profile;
    Id vl_instance; ///< empty when the VL is created by this change
    double from_bitrate = 0.0;
    double to_bitrate = 0.0;
    double increment = 0.0;          ///< bandwidth to allocate (increase or top-up)
    std::size_t release_count = 0;   ///< handles released from the end
};

enum class OpKind { scale_vnf, add_vnf, remove_vnf, modify_vl };
std::string_view to_string(OpKind k);

struct PlannedOp {
    OpKind kind = OpKind::scale_vnf;
    Id profile;
    Id vnfd;
    Id vnf_flavor;
    std::string owner;  ///< existing instance id, or <profile>+n for add_vnf
    Id from_il;         ///< empty for add_vnf
    Id to_il;           ///< empty for remove_vnf
    IlDelta delta;
    std::vector<VlChange> vl_changes;
};

struct TransitionPlan {
    Id from;
    Id to;
    Procedure classification = Procedure::none;
    std::vector<Addition> additions;
    std::vector<PlannedOp> ops; ///< adds, then VNF-IL changes, then removes
};

/// Derives the additions and the serial operation list that move the NS
/// from its current state to `target`. Instances of profiles listed in
/// `anti_affinity` get the profile id as anti-affinity label.
TransitionPlan plan_transition(const Catalog& catalog, const NsDeploymentFlavor& flavor, const NsSnapshot& state,
                               const Id& target, const std::vector<Id>& anti_affinity = {});

/// Additions belonging to one op, in plan order.
std::vector<const Addition*> additions_of(const TransitionPlan& plan, const PlannedOp& op);

} // namespace nsscale
