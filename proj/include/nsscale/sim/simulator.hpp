#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"

#include "nsscale/scenario.hpp"
#include "nsscale/sim/world.hpp"

namespace nsscale::sim {

struct RunOptions {
    std::optional<std::uint64_t> seed;          ///< overrides the scenario seed
    std::optional<bool> reservation_enabled;    ///< overrides the scenario option
    Tick max_tick = 1'000'000;
};

/// Called after every delivery (with its record) and after every workload
/// event (with nullptr).
using Observer = std::function<void(const World&, const EventRecord*)>;

struct OperationSummary {
    Id op_id;
    OpKind kind = OpKind::scale_vnf;
    Phase phase = Phase::triggered;
    Id vnf_instance;
    std::vector<std::pair<int, Tick>> step_log;
    std::string failure;
    std::uint64_t closed_after = 0;
};

struct RunResult {
    EventTrace trace;
    nlohmann::json final_state;
    bool op_failed = false;
    std::vector<OperationSummary> operations;
    std::vector<DrpaDecision> decisions;
};

/// Deterministic event loop over one scenario.
class Simulation {
public:
    Simulation(const Scenario& scenario, const RunOptions& options = {});

    /// Processes every tick up to and including `tick`.
    void run_until(Tick tick, const Observer& observer = {});
    /// Runs until the workload and the queue are exhausted.
    void run(const Observer& observer = {});

    /// Decision the NFVO would take now, without touching cooldown state.
    /// Returns the decision or an error message.
    DrpaDecision probe(std::vector<RuleVerdict>& verdicts, std::string& error);

    const World& world() const { return *world_; }
    World& world() { return *world_; }
    bool finished() const;

    RunResult result() const;

private:
    std::optional<Tick> next_tick() const;
    void process_tick(Tick t, const Observer& observer);
    void inject(const WorkloadEvent& e, const Observer& observer);

    const Scenario& scenario_;
    RunOptions options_;
    std::unique_ptr<World> world_;
    std::vector<WorkloadEvent> events_;
    std::size_t next_event_ = 0;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {}, const Observer& observer = {});

nlohmann::json operations_json(const std::vector<OperationSummary>& ops);

} // namespace nsscale::sim
