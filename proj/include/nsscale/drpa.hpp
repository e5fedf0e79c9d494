#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsscale/capacity.hpp"
#include "nsscale/deltas.hpp"
#include "nsscale/descriptor.hpp"
#include "nsscale/errors.hpp"
#include "nsscale/inventory.hpp"
#include "nsscale/monitoring.hpp"
#include "nsscale/transition.hpp"

namespace nsscale {

struct CostModel {
    CapacityVector weights{1.0, 1.0, 1.0, 1.0};

    double cost(const CapacityVector& c) const;
};

struct DemandEstimate {
    std::optional<ScalingDirection> direction; ///< empty: nothing triggered
    CapacityVector required;
    double headroom = 0.6;                     ///< target utilization
    /// dimension -> (observed utilization, capacity of the observed scope)
    std::map<Dimension, std::pair<double, double>> basis;
};

/// Available capacity of one PoP, summed over its zones.
struct PopCapacity {
    Id pop;
    Id vim;
    CapacityVector available;
};

std::vector<PopCapacity> pop_capacities(const ResourceInventory& inventory);

struct PlacementConstraints {
    std::vector<Id> anti_affinity; ///< VNF profile ids whose instances need distinct PoPs
};

/// An existing instance holding an anti-affinity label in a PoP.
struct Presence {
    std::string label;
    std::string owner;
    Id pop;
};

std::vector<Presence> presences(const NsSnapshot& state, const PlacementConstraints& constraints);

using PlacementMap = std::map<std::string, Id>; ///< addition key -> PoP id

struct Placement {
    PlacementMap pops;
    std::set<Id> selected_vims;
};

class NoFeasibleLevelError : public Error {
public:
    using Error::Error;
};

class UnplaceableError : public Error {
public:
    UnplaceableError(std::string addition, std::optional<Dimension> shortfall, const std::string& message)
        : Error(message), addition_(std::move(addition)), shortfall_(shortfall) {}

    const std::string& addition() const noexcept { return addition_; }
    std::optional<Dimension> shortfall() const noexcept { return shortfall_; }

private:
    std::string addition_;
    std::optional<Dimension> shortfall_;
};

/// Required capacity per violated dimension:
///   (current(d) - scope(d)) + u * scope(d) / target
/// where `scope(d)` is the capacity of the observed VNFD's instances (the
/// whole NS for NS-level metrics). The maximum over observations wins;
/// other dimensions keep the current capacity.
DemandEstimate estimate_demand(const std::vector<RuleVerdict>& verdicts, const CapacityVector& current,
                               const std::function<CapacityVector(const Id& scope)>& scope_capacity,
                               double target_utilization);

/// Throws NoFeasibleLevelError when the candidate set is empty.
std::vector<Id> candidate_ns_ils(const Catalog& catalog, const NsDeploymentFlavor& flavor,
                                 const DemandEstimate& estimate, ScalingDirection direction, const Id& current,
                                 const CostModel& cost_model);

/// First-fit over PoPs in ascending id. Throws UnplaceableError.
Placement plan_placement(const std::vector<Addition>& additions, const std::vector<PopCapacity>& pops,
                         const std::vector<Presence>& existing = {});

struct CandidateEvaluation {
    Id ns_il;
    CapacityVector capacity;
    double cost = 0.0;
    int instances = 0;
    bool is_candidate = false;
    bool placeable = false;
    bool chosen = false;
    std::string reason;
};

struct DrpaDecision {
    enum class Action { none, scale };

    Action action = Action::none;
    Id current_ns_il;
    Id target_ns_il;
    Procedure classification = Procedure::none;
    std::optional<ScalingDirection> direction;
    DemandEstimate estimate;
    PlacementMap placement;
    std::set<Id> selected_vims;
    std::vector<CandidateEvaluation> rationale; ///< every NS-IL, declaration order
    std::vector<RuleVerdict> verdicts;
};

struct DrpaContext {
    const Catalog* catalog = nullptr;
    const NsDeploymentFlavor* flavor = nullptr;
    NsSnapshot state;
    std::vector<PopCapacity> capacity;
    PlacementConstraints constraints;
};

struct DrpaInput {
    DrpaContext context;
    std::vector<RuleVerdict> verdicts;
};

/// Among `candidates`, the placeable one with minimum cost; ties go to fewer
/// VNF instances, then declaration order. Throws UnplaceableError when no
/// candidate can be placed.
DrpaDecision select_optimum(const std::vector<Id>& candidates, const CostModel& cost_model, const DrpaContext& ctx);

/// Full pipeline. Throws NoFeasibleLevelError or UnplaceableError.
DrpaDecision decide(const DrpaInput& input, const CostModel& cost_model, double target_utilization);

/// Brute-force oracle for select_optimum: enumerates every NS-IL with its
/// own feasibility, cost and first-fit checks.
std::optional<Id> exhaustive_select(const DrpaContext& ctx, const DemandEstimate& estimate, ScalingDirection direction,
                                    const CostModel& cost_model);

nlohmann::json to_json(const DrpaDecision& d);

} // namespace nsscale
