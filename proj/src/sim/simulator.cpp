#include "nsscale/sim/simulator.hpp"

namespace nsscale::sim {

Simulation::Simulation(const Scenario& scenario, const RunOptions& options)
    : scenario_(scenario), options_(options)
{
    world_ = std::make_unique<World>(scenario,
                                     options.reservation_enabled.value_or(scenario.options.reservation_enabled));
    events_ = materialize_workload(scenario, options.seed.value_or(scenario.options.seed));
}

bool Simulation::finished() const
{
    return next_event_ >= events_.size() && !world_->has_pending();
}

std::optional<Tick> Simulation::next_tick() const
{
    std::optional<Tick> t;
    if (next_event_ < events_.size()) {
        t = event_tick(events_[next_event_]);
    }
    if (world_->has_pending()) {
        const Tick d = world_->next_delivery();
        t = t ? std::min(*t, d) : d;
    }
    return t;
}

void Simulation::inject(const WorkloadEvent& e, const Observer& observer)
{
    World& w = *world_;
    if (const auto* s = std::get_if<WorkloadSample>(&e)) {
        std::vector<Notification> notes;
        try {
            notes = w.ingestor.ingest(w.store, MetricSample{s->tick, s->subject, s->metric, s->value});
        } catch (const TimeRegressionError& err) {
            throw ScenarioError(err.what());
        }
        for (const auto& n : notes) {
            const auto vnfd = w.vnfd_of_instance(n.subject());
            const std::string origin = vnfd ? w.vnfm_for_vnfd(*vnfd) : w.vim_actor(w.scenario.topology.vims.front());
            Message m{std::string(n.name()), origin, kNfvo, 1, "", {{"time", n.time}}};
            if (const auto* p = std::get_if<PerfInfoAvailable>(&n.payload)) {
                nlohmann::json samples = nlohmann::json::array();
                for (const auto& x : p->samples) {
                    samples.push_back({{"time", x.time}, {"subject", x.subject}, {"name", x.name}, {"value", x.value}});
                }
                m.payload["samples"] = std::move(samples);
            } else if (const auto* c = std::get_if<ThresholdCrossed>(&n.payload)) {
                m.step = 2;
                m.payload["threshold_id"] = c->threshold_id;
                m.payload["subject"] = c->subject;
                m.payload["metric"] = c->metric;
                m.payload["value"] = c->value;
            }
            w.send(std::move(m));
        }
    } else {
        const auto& ind = std::get<WorkloadIndicator>(e);
        const auto vnfd = w.vnfd_of_instance(ind.vnf);
        if (!vnfd) {
            if (observer) {
                observer(w, nullptr);
            }
            return;
        }
        const Notification n = indicator_change(w.catalog.vnfd(*vnfd), ind.vnf, ind.indicator, ind.value, ind.tick);
        w.store.append(MetricSample{ind.tick, ind.vnf, ind.indicator, ind.value});
        w.send(Message{std::string(n.name()), w.em_for_vnfd(*vnfd), w.vnfm_for_vnfd(*vnfd), 3, "",
                       {{"vnf_instance", ind.vnf}, {"name", ind.indicator}, {"value", ind.value}, {"time", ind.tick}}});
    }
    if (observer) {
        observer(w, nullptr);
    }
}

void Simulation::process_tick(Tick t, const Observer& observer)
{
    World& w = *world_;
    w.now = t;
    while (next_event_ < events_.size() && event_tick(events_[next_event_]) == t) {
        inject(events_[next_event_++], observer);
    }
    while (auto m = w.pop_due(t)) {
        const EventRecord& rec = w.trace.record(*m, t);
        w.log_step(*m);
        if (m->dst == kNfvo) {
            nfvo_handle(w, *m);
        } else if (m->dst.rfind("VNFM-", 0) == 0) {
            vnfm_handle(w, *m);
        } else if (m->dst.rfind("VIM-", 0) == 0) {
            vim_handle(w, *m);
        }
        if (!m->op_id.empty()) {
            settle_op(w, m->op_id);
        }
        if (observer) {
            observer(w, &rec);
        }
    }
}

void Simulation::run_until(Tick tick, const Observer& observer)
{
    while (auto t = next_tick()) {
        if (*t > tick || *t > options_.max_tick) {
            break;
        }
        process_tick(*t, observer);
    }
    if (world_->now < tick) {
        world_->now = tick;
    }
}

void Simulation::run(const Observer& observer)
{
    run_until(options_.max_tick, observer);
}

DrpaDecision Simulation::probe(std::vector<RuleVerdict>& verdicts, std::string& error)
{
    World& w = *world_;
    verdicts = w.engine.evaluate(w.store, w.now, false);
    DrpaDecision d;
    d.current_ns_il = w.repo.ns.current_ns_il;
    d.verdicts = verdicts;
    const bool violated = std::any_of(verdicts.begin(), verdicts.end(),
                                      [](const RuleVerdict& v) { return !v.satisfied && !v.in_cooldown; });
    if (!violated) {
        return d;
    }
    try {
        return decide(DrpaInput{w.drpa_context(), verdicts}, scenario_.options.cost_model,
                      scenario_.options.target_utilization);
    } catch (const NoFeasibleLevelError& e) {
        error = e.what();
    } catch (const UnplaceableError& e) {
        error = e.what();
    }
    return d;
}

RunResult Simulation::result() const
{
    const World& w = *world_;
    RunResult r;
    r.trace = w.trace;
    r.op_failed = w.failed_ops > 0;
    r.decisions = w.decisions;
    for (const auto& id : w.op_order) {
        const ScalingOperation& op = w.ops.at(id);
        r.operations.push_back({op.op_id, op.kind, op.phase, op.vnf_instance, op.step_log, op.failure, op.closed_after});
    }
    r.final_state = {{"repository", to_json(w.repo)}, {"operations", operations_json(r.operations)}};
    return r;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options, const Observer& observer)
{
    Simulation sim(scenario, options);
    sim.run(observer);
    return sim.result();
}

nlohmann::json operations_json(const std::vector<OperationSummary>& ops)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& op : ops) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& [s, t] : op.step_log) {
            steps.push_back({s, t});
        }
        nlohmann::json j{{"op_id", op.op_id},
                         {"kind", to_string(op.kind)},
                         {"phase", to_string(op.phase)},
                         {"vnf_instance", op.vnf_instance},
                         {"step_log", std::move(steps)}};
        if (!op.failure.empty()) {
            j["failure"] = op.failure;
        }
        out.push_back(std::move(j));
    }
    return out;
}

} // namespace nsscale::sim
