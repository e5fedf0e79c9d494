#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsscale/drpa.hpp"
#include "nsscale/inventory.hpp"
#include "nsscale/monitoring.hpp"
#include "nsscale/scenario.hpp"
#include "nsscale/sim/message.hpp"
#include "nsscale/sim/trace.hpp"
#include "nsscale/transition.hpp"

namespace nsscale::sim {

inline constexpr const char* kNfvo = "NFVO";

enum class Phase { collecting, triggered, allocating, releasing, completed, failed };
std::string_view to_string(Phase p);

struct AllocatedItem {
    std::string key;
    Id handle;
    Id zone;
    ResourceKind kind = ResourceKind::compute;
};

/// One lifecycle operation of a scaling plan.
struct ScalingOperation {
    Id op_id;
    OpKind kind = OpKind::scale_vnf;
    Phase phase = Phase::triggered;
    std::string sub_phase;
    std::vector<std::pair<int, Tick>> step_log;
    PlannedOp plan;
    Id vnf_instance; ///< actual instance id; empty for modify-vl
    std::vector<Addition> additions;
    std::map<std::string, Id> placement; ///< addition key -> PoP
    std::string vnfm;
    std::string em;
    std::string failure;

    // NFVO grant bookkeeping
    int pending_reservations = 0;
    std::vector<nlohmann::json> reservations; ///< {id, vim, kind}
    std::string reservation_error;

    // VNFM bookkeeping
    int pending_allocations = 0;
    std::vector<AllocatedItem> allocated;
    std::string allocation_error;
    std::vector<Id> new_vnfcs;
    std::vector<Id> removed_vnfcs;
    std::vector<Id> release_handles;
    int pending_releases = 0;
    bool il_recorded = false;

    bool closing = false;            ///< finished; waits for in-flight messages
    std::uint64_t closed_after = 0;  ///< trace size when the op closed
};

/// A failed step inside an operation; carries the reason into the trace.
class OperationFailure : public Error {
public:
    using Error::Error;
};

/// Shared simulation state. Actors are free functions over the world;
/// all mutation happens on the event loop.
class World {
public:
    World(const Scenario& scenario, bool reservation_enabled);
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    const Scenario& scenario;
    const Catalog& catalog;
    const Nsd& nsd;
    const NsDeploymentFlavor& flavor;
    bool reservation_enabled = true;

    Repository repo;
    MetricStore store;
    MetricIngestor ingestor;
    RuleEngine engine;
    EventTrace trace;
    Tick now = 0;

    std::map<Id, ScalingOperation> ops;
    std::vector<Id> op_order;
    std::optional<TransitionPlan> plan;
    std::optional<DrpaDecision> decision;
    std::size_t next_plan_op = 0;
    std::vector<DrpaDecision> decisions; ///< every scale decision, in order
    int failed_ops = 0;

    /// Enqueues for delivery at now + 1.
    void send(Message m);
    bool has_pending() const { return !queue_.empty(); }
    Tick next_delivery() const { return queue_.top().deliver; }
    /// Pops the next message if it is due at `tick`.
    std::optional<Message> pop_due(Tick tick);

    std::string vnfm_for_vnfd(const Id& vnfd) const;
    std::string em_for_vnfd(const Id& vnfd) const;
    std::string vim_actor(const Id& vim_ref) const;
    Id vim_ref_of(const std::string& actor) const;
    /// VNFD of an existing VNF instance.
    std::optional<Id> vnfd_of_instance(const Id& vnf_instance) const;

    ScalingOperation& op(const Id& op_id);
    ScalingOperation* current_op();
    DrpaContext drpa_context() const;

    /// Records a delivered message against its operation's step log.
    void log_step(const Message& m);
    /// Messages of an op still queued.
    int in_flight(const Id& op_id) const;

private:
    struct Queued {
        Tick deliver;
        std::uint64_t order;
        Message msg;

        bool operator>(const Queued& o) const { return deliver != o.deliver ? deliver > o.deliver : order > o.order; }
    };

    void instantiate();

    std::priority_queue<Queued, std::vector<Queued>, std::greater<>> queue_;
    std::uint64_t send_order_ = 0;
    std::map<Id, int> in_flight_;
};

// NFVO
void nfvo_on_notification(World& w, const Message& m);
void nfvo_handle(World& w, const Message& m);
void nfvo_start_plan(World& w);
void nfvo_on_op_complete(World& w, const Id& op_id);
void nfvo_on_op_failed(World& w, const Id& op_id, const std::string& reason);

// VNFM
void vnfm_handle(World& w, const Message& m);

// VIM
void vim_handle(World& w, const Message& m);

/// Releases the op's handles and cancels its active reservations.
void rollback_allocations(World& w, ScalingOperation& op);

/// Marks the op completed (VL bookkeeping applied) and closes it.
void complete_op(World& w, ScalingOperation& op);
/// Rolls back, marks the op failed and blocks the NS.
void fail_op(World& w, ScalingOperation& op, const std::string& reason);
/// Runs the NFVO continuation of a closing op once nothing of it is in flight.
void settle_op(World& w, const Id& op_id);

/// Attaches allocated bandwidth handles to their VL instances.
void attach_vl_handles(World& w, ScalingOperation& op);
/// Handles to release for the op's VL decreases, newest first.
std::vector<Id> vl_release_handles(const World& w, const ScalingOperation& op);
/// Groups handles by owning VIM actor.
std::map<std::string, std::vector<Id>> handles_by_vim(const World& w, const std::vector<Id>& handles);

nlohmann::json capacity_json(const CapacityVector& c);

} // namespace nsscale::sim
