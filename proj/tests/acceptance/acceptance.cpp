#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "nsscale/audit.hpp"
#include "nsscale/drpa.hpp"
#include "nsscale/sim/simulator.hpp"
#include "nsscale/validation.hpp"

using namespace nsscale;
using namespace nsscale::testing;
using sim::EventRecord;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why)
    {
        if (pass) {
            detail.str("");
        }
        pass = false;
        detail << why << "; ";
    }
};

constexpr int kAllocationEnd = 19;

bool in_allocation(int step) { return step >= 6 && step <= kAllocationEnd; }
bool in_release(int step) { return step >= 20 && step <= 28; }

std::vector<const EventRecord*> records_named(const sim::RunResult& r, const std::string& name)
{
    std::vector<const EventRecord*> out;
    for (const auto& rec : r.trace.records()) {
        if (rec.message == name) {
            out.push_back(&rec);
        }
    }
    return out;
}

bool lists_vdu(const EventRecord& rec, const std::string& vdu)
{
    for (const auto& id : rec.payload.value("instance_ids", nlohmann::json::array())) {
        if (id.get<std::string>().find("/" + vdu + "-") != std::string::npos) {
            return true;
        }
    }
    return false;
}

void escalation(Outcome& o)
{
    const sim::RunResult r = sim::run_scenario(sample_scenario("escalation"));
    std::vector<std::string> path;
    std::string last_class;
    for (const EventRecord* rec : records_named(r, "DrpaDecision")) {
        if (rec->payload.value("action", "") != "scale") {
            continue;
        }
        const std::string from = rec->payload.at("current_ns_il");
        const std::string to = rec->payload.at("target_ns_il");
        if (path.empty()) {
            path.push_back(from);
        } else if (path.back() != from) {
            o.fail("decision starts at " + from + " after reaching " + path.back());
        }
        path.push_back(to);
        last_class = rec->payload.at("classification");
    }
    const std::vector<std::string> expected{"NS-IL#1", "NS-IL#2", "NS-IL#3", "NS-IL#4"};
    if (path != expected) {
        std::string got;
        for (const auto& p : path) {
            got += p + " ";
        }
        o.fail("path " + got);
    }
    if (last_class != "add-vnf") {
        o.fail("#3->#4 classified " + last_class);
    }
    if (r.final_state.at("repository").at("ns").at("current_ns_il") != "NS-IL#4") {
        o.fail("final level is not NS-IL#4");
    }
    if (o.pass) {
        o.detail << "NS-IL#1 -> #2 -> #3 -> #4, last edge add-vnf";
    }
}

void golden_trace(Outcome& o)
{
    const sim::RunResult r = sim::run_scenario(sample_scenario("il1-to-il3"));
    if (r.operations.size() != 1) {
        o.fail(std::to_string(r.operations.size()) + " operations");
        return;
    }
    const auto& log = r.operations[0].step_log;
    std::set<int> seen;
    int prev = 0;
    bool releasing = false;
    int alloc_max = 0;
    int release_min = 100;
    Tick alloc_last_tick = 0;
    Tick release_first_tick = -1;
    for (const auto& [step, tick] : log) {
        seen.insert(step);
        if (step < prev) {
            o.fail("step " + std::to_string(step) + " after " + std::to_string(prev));
        }
        prev = step;
        if (in_allocation(step)) {
            if (releasing) {
                o.fail("allocation step " + std::to_string(step) + " inside release phase");
            }
            alloc_max = std::max(alloc_max, step);
            alloc_last_tick = std::max(alloc_last_tick, tick);
        } else if (in_release(step)) {
            releasing = true;
            release_min = std::min(release_min, step);
            if (release_first_tick < 0) {
                release_first_tick = tick;
            }
        }
    }
    for (int k = 5; k <= 28; ++k) {
        if (!seen.count(k)) {
            o.fail("step " + std::to_string(k) + " missing");
        }
    }
    if (!(alloc_max < release_min)) {
        o.fail("allocation max step " + std::to_string(alloc_max) + " >= release min step " +
               std::to_string(release_min));
    }
    if (!(alloc_last_tick <= release_first_tick)) {
        o.fail("allocation tick after release start");
    }
    const std::string golden = read_text(source_path("tests/golden/il1-to-il3.trace"));
    if (golden.empty()) {
        o.fail("golden file missing");
    } else if (golden != r.trace.text()) {
        o.fail("trace differs from golden file");
    }
    if (o.pass) {
        o.detail << "steps 5-28 in order, alloc max " << alloc_max << " < release min " << release_min
                 << ", " << r.trace.size() << " lines match golden";
    }
}

void continuity(Outcome& o)
{
    const sim::RunResult r = sim::run_scenario(sample_scenario("il1-to-il3"));
    std::optional<Tick> started;
    std::optional<Tick> stopped;
    for (const EventRecord* rec : records_named(r, "VnfInfoUpdate")) {
        if (rec->step == 19 && lists_vdu(*rec, "VDU#2")) {
            started = rec->tick;
        }
        if (rec->step == 24 && lists_vdu(*rec, "VDU#1")) {
            stopped = rec->tick;
        }
    }
    if (!started || !stopped) {
        o.fail("missing step-19 VDU#2 or step-24 VDU#1 update");
        return;
    }
    if (*started > *stopped) {
        o.fail("VDU#2 started at " + std::to_string(*started) + " after VDU#1 stopped at " +
               std::to_string(*stopped));
        return;
    }
    o.detail << "VDU#2 STARTED at tick " << *started << ", VDU#1 STOPPED at tick " << *stopped;
}

void reservation_toggle(Outcome& o)
{
    int ops_checked = 0;
    for (const char* name : {"il1-to-il3", "escalation", "add-remove", "indicator"}) {
        const Scenario sc = sample_scenario(name);

        sim::RunOptions off;
        off.reservation_enabled = false;
        const sim::RunResult plain = sim::run_scenario(sc, off);
        for (const auto& rec : plain.trace.records()) {
            if (rec.message.rfind("Reserve", 0) == 0) {
                o.fail(std::string(name) + ": " + rec.message + " with reservation disabled");
            }
        }
        const sim::RunResult with = sim::run_scenario(sc);
        auto has = [](const sim::OperationSummary& op, int step) {
            return std::any_of(op.step_log.begin(), op.step_log.end(), [&](const auto& e) { return e.first == step; });
        };
        if (plain.operations.size() != with.operations.size()) {
            o.fail(std::string(name) + ": operation count differs with reservation disabled");
        } else {
            for (std::size_t i = 0; i < with.operations.size(); ++i) {
                if (has(with.operations[i], 6) && (!has(plain.operations[i], 6) || !has(plain.operations[i], 10))) {
                    o.fail(std::string(name) + ": grant pair missing in " + plain.operations[i].op_id);
                }
            }
        }
        std::map<std::string, std::map<std::string, std::vector<std::string>>> kinds; // op -> VIM -> kinds
        for (const EventRecord* rec : records_named(with, "ReserveRequest")) {
            kinds[rec->op_id][rec->dst].push_back(rec->payload.at("kind"));
        }
        std::map<std::string, std::set<std::string>> grant_vims; // op -> VIM actors in the grant
        for (const EventRecord* rec : records_named(with, "GrantResponse")) {
            if (rec->step == 10 && rec->payload.value("granted", false)) {
                for (const auto& [vim, conn] : rec->payload.at("vim_connectivity").items()) {
                    grant_vims[rec->op_id].insert(vim);
                }
            }
        }
        for (const auto& [op, per_vim] : kinds) {
            std::set<std::string> vims;
            for (const auto& [vim, ks] : per_vim) {
                vims.insert(vim);
                std::vector<std::string> sorted = ks;
                std::sort(sorted.begin(), sorted.end());
                if (sorted != std::vector<std::string>{"compute", "network", "storage"}) {
                    o.fail(std::string(name) + ": " + op + " " + vim + " has " + std::to_string(ks.size()) +
                           " ReserveRequests");
                }
            }
            if (vims != grant_vims[op]) {
                o.fail(std::string(name) + ": " + op + " reserved on VIMs other than the selected ones");
            }
            ++ops_checked;
        }
    }
    if (ops_checked == 0) {
        o.fail("no reserving operation observed");
    }
    if (o.pass) {
        o.detail << "no Reserve* when disabled; 3 kinds per selected VIM across " << ops_checked << " operations";
    }
}

void conservation(Outcome& o)
{
    std::uint64_t boundaries = 0;
    std::uint64_t seed = 1;
    int scenarios = 0;
    int ops = 0;
    while ((boundaries < 10000 || scenarios < 20) && seed < 500) {
        const Scenario sc = random_scenario(seed++);
        TraceAuditor auditor;
        const auto r = sim::run_scenario(sc, {}, [&](const sim::World& w, const EventRecord* rec) {
            auditor.observe(w, rec);
        });
        for (const auto& v : auditor.violations()) {
            o.fail("seed " + std::to_string(seed - 1) + " seq " + std::to_string(v.seq) + " " + v.invariant + ": " +
                   v.detail);
            break;
        }
        boundaries += auditor.boundaries();
        ops += static_cast<int>(r.operations.size());
        ++scenarios;
    }
    if (boundaries < 10000) {
        o.fail("only " + std::to_string(boundaries) + " event boundaries");
    }
    if (o.pass) {
        o.detail << boundaries << " event boundaries over " << scenarios << " scenarios (" << ops
                 << " operations), no violation";
    }
}

std::optional<Id> fast_select(const DrpaContext& ctx, const DemandEstimate& e, const Id& current)
{
    try {
        const auto cands = candidate_ns_ils(*ctx.catalog, *ctx.flavor, e, *e.direction, current, CostModel{});
        return select_optimum(cands, CostModel{}, ctx).target_ns_il;
    } catch (const NoFeasibleLevelError&) {
    } catch (const UnplaceableError&) {
    }
    return std::nullopt;
}

void optimum_oracle(Outcome& o)
{
    std::mt19937_64 rng(6);
    int compared = 0;
    int chosen = 0;
    for (const char* name : {"il1-to-il3", "add-remove", "fragmented"}) {
        const Scenario sc = sample_scenario(name);
        sim::Simulation s(sc);
        const DrpaContext ctx = s.world().drpa_context();
        for (int i = 0; i < 100; ++i) {
            const DemandEstimate e = random_demand(rng, sc.catalog, sc.flavor());
            const auto fast = fast_select(ctx, e, ctx.state.current_ns_il);
            const auto slow = exhaustive_select(ctx, e, *e.direction, CostModel{});
            if (fast != slow) {
                o.fail(std::string("sample ") + name + " demand " + std::to_string(i) + ": " + fast.value_or("none") +
                       " vs " + slow.value_or("none"));
            }
            chosen += fast ? 1 : 0;
            ++compared;
        }
    }
    for (int f = 0; f < 100; ++f) {
        RandomDrpaCase rc;
        random_drpa_case(rng, 8, rc);
        for (int i = 0; i < 100; ++i) {
            const DemandEstimate e = random_demand(rng, rc.catalog, *rc.context.flavor);
            const auto fast = fast_select(rc.context, e, rc.current);
            const auto slow = exhaustive_select(rc.context, e, *e.direction, CostModel{});
            if (fast != slow) {
                o.fail("flavor " + std::to_string(f) + " demand " + std::to_string(i) + ": " + fast.value_or("none") +
                       " vs " + slow.value_or("none"));
            }
            chosen += fast ? 1 : 0;
            ++compared;
        }
    }
    if (o.pass) {
        o.detail << compared << " comparisons agree (" << chosen << " with a selected level)";
    }
}

void state_machine(Outcome& o)
{
    int scenarios = 0;
    int quiescent_checks = 0;
    int transitions = 0;
    int ops = 0;
    for (std::uint64_t seed = 101; seed <= 130; ++seed) {
        const Scenario sc = random_scenario(seed);
        const std::string tag = "seed " + std::to_string(seed) + ": ";
        std::map<Id, VnfcState> states;
        bool primed = false;
        auto snapshot = [](const sim::World& w) {
            std::map<Id, VnfcState> out;
            for (const auto& [id, info] : w.repo.vnfs) {
                for (const auto& c : info.vnfc_instances) {
                    out[c.id] = c.state;
                }
            }
            return out;
        };
        sim::Simulation s(sc);
        states = snapshot(s.world());
        primed = true;
        s.run([&](const sim::World& w, const EventRecord* rec) {
            const auto now = snapshot(w);
            for (const auto& [id, st] : now) {
                auto it = states.find(id);
                const bool was_started = it != states.end() && it->second == VnfcState::started;
                if (st == VnfcState::started && !was_started) {
                    ++transitions;
                    if (!rec || rec->message != "VnfInfoUpdate" || rec->step != 19 || it == states.end()) {
                        o.fail(tag + id + " became STARTED outside step 19");
                    }
                }
                if (st == VnfcState::stopped && was_started) {
                    ++transitions;
                    if (!rec || rec->message != "VnfInfoUpdate" || rec->step != 24) {
                        o.fail(tag + id + " became STOPPED outside step 24");
                    }
                }
            }
            states = now;
            if (!w.has_pending() && w.repo.ns.state == NsState::instantiated) {
                ++quiescent_checks;
                for (const auto& v : check_quiescent(w)) {
                    o.fail(tag + "quiescent: " + v);
                }
            }
        });
        (void)primed;
        const auto r = s.result();
        for (const auto& op : r.operations) {
            ++ops;
            if (op.phase != sim::Phase::completed && op.phase != sim::Phase::failed) {
                o.fail(tag + op.op_id + " never finished");
                continue;
            }
            for (const auto& rec : r.trace.records()) {
                if (rec.op_id == op.op_id && rec.seq > op.closed_after) {
                    o.fail(tag + op.op_id + " has message seq " + std::to_string(rec.seq) + " after completion");
                    break;
                }
            }
        }
        ++scenarios;
    }
    if (ops == 0) {
        o.fail("no operation ran");
    }
    if (o.pass) {
        o.detail << scenarios << " scenarios, " << ops << " operations, " << transitions << " VNFC transitions, "
                 << quiescent_checks << " quiescent checks";
    }
}

void determinism(Outcome& o)
{
    std::size_t lines = 0;
    for (std::uint64_t seed = 201; seed <= 220; ++seed) {
        const Scenario sc = random_scenario(seed);
        const auto a = sim::run_scenario(sc);
        const auto b = sim::run_scenario(sc);
        if (a.trace.text() != b.trace.text()) {
            o.fail("seed " + std::to_string(seed) + ": traces differ");
        }
        if (a.final_state.dump() != b.final_state.dump()) {
            o.fail("seed " + std::to_string(seed) + ": final states differ");
        }
        lines += a.trace.size();
    }
    if (o.pass) {
        o.detail << "20 scenarios replayed byte-identically (" << lines << " trace lines)";
    }
}

void broken_corpus(Outcome& o)
{
    const auto clean = validate_catalog(sample_catalog());
    if (!clean.empty()) {
        o.fail("sample reports " + std::to_string(clean.entries.size()) + " entries");
    }
    const auto cases = broken_cases();
    if (cases.size() < 15) {
        o.fail("only " + std::to_string(cases.size()) + " broken descriptors");
    }
    for (const auto& c : cases) {
        try {
            const auto report = validate_catalog(load_catalog(c.documents));
            if (report.entries.size() != 1) {
                o.fail(c.name + ": " + std::to_string(report.entries.size()) + " entries");
            } else if (report.entries[0].kind != c.kind || report.entries[0].path != c.path) {
                o.fail(c.name + ": got " + report.entries[0].kind + " " + report.entries[0].path);
            }
        } catch (const Error& e) {
            o.fail(c.name + ": " + e.what());
        }
    }
    if (o.pass) {
        o.detail << cases.size() << " broken descriptors each yield their entry; sample clean";
    }
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"1 sample-escalation", escalation},
        {"2 golden-trace", golden_trace},
        {"3 service-continuity", continuity},
        {"4 reservation-toggle", reservation_toggle},
        {"5 conservation", conservation},
        {"6 optimum-oracle", optimum_oracle},
        {"7 state-machine", state_machine},
        {"8 determinism", determinism},
        {"9 broken-descriptors", broken_corpus},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            check(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
