#include <algorithm>

#include "doctest.h"

#include "support/fixtures.hpp"
#include "nsscale/audit.hpp"
#include "nsscale/sim/simulator.hpp"

using namespace nsscale;
using namespace nsscale::testing;
using nsscale::sim::EventRecord;

namespace {

std::vector<const EventRecord*> named(const sim::RunResult& r, const std::string& name)
{
    std::vector<const EventRecord*> out;
    for (const auto& rec : r.trace.records()) {
        if (rec.message == name) {
            out.push_back(&rec);
        }
    }
    return out;
}

std::vector<int> steps(const sim::OperationSummary& op)
{
    std::vector<int> out;
    for (const auto& [step, tick] : op.step_log) {
        out.push_back(step);
    }
    return out;
}

sim::RunResult audited_run(const Scenario& sc, const sim::RunOptions& options = {})
{
    TraceAuditor auditor;
    auto r = sim::run_scenario(sc, options, [&](const sim::World& w, const EventRecord* rec) { auditor.observe(w, rec); });
    for (const auto& v : auditor.violations()) {
        INFO("seq " << v.seq << ' ' << v.invariant << ": " << v.detail);
        CHECK(false);
    }
    return r;
}

} // namespace

TEST_CASE("IL#1 to IL#3 runs both phases")
{
    const Scenario sc = sample_scenario("il1-to-il3");
    const sim::RunResult r = audited_run(sc);
    CHECK_FALSE(r.op_failed);
    REQUIRE(r.decisions.size() == 1);
    CHECK(r.decisions[0].target_ns_il == "NS-IL#3");
    REQUIRE(r.operations.size() == 1);
    const auto& op = r.operations[0];
    CHECK(op.phase == sim::Phase::completed);

    const auto s = steps(op);
    CHECK(std::is_sorted(s.begin(), s.end()));
    for (int k = 5; k <= 28; ++k) {
        CHECK(std::count(s.begin(), s.end(), k) >= 1);
    }

    Tick started = -1;
    Tick stopped = -1;
    for (const auto& rec : r.trace.records()) {
        if (rec.message == "VnfInfoUpdate" && rec.step == 19) {
            started = rec.tick;
        }
        if (rec.message == "VnfInfoUpdate" && rec.step == 24) {
            stopped = rec.tick;
        }
    }
    CHECK(started > 0);
    CHECK(started < stopped);

    const auto& repo = r.final_state.at("repository");
    CHECK(repo.at("ns").at("current_ns_il") == "NS-IL#3");
}

TEST_CASE("grant carries reservation ids")
{
    const sim::RunResult r = sim::run_scenario(sample_scenario("il1-to-il3"));
    const auto grants = named(r, "GrantResponse");
    REQUIRE_FALSE(grants.empty());
    CHECK(grants[0]->step == 10);
    CHECK(grants[0]->payload.at("granted") == true);
    CHECK(grants[0]->payload.at("reservation_ids").size() == 3);
    CHECK(named(r, "ReserveRequest").size() == 3);
}

TEST_CASE("reservation disabled keeps the grant pair only")
{
    sim::RunOptions options;
    options.reservation_enabled = false;
    const sim::RunResult r = audited_run(sample_scenario("il1-to-il3"), options);
    CHECK(named(r, "ReserveRequest").empty());
    CHECK(named(r, "ReserveResponse").empty());
    CHECK(named(r, "VimPlacement").empty());
    const auto s = steps(r.operations.at(0));
    CHECK(std::count(s.begin(), s.end(), 6) == 1);
    CHECK(std::count(s.begin(), s.end(), 7) == 0);
    CHECK(std::count(s.begin(), s.end(), 10) == 1);
    CHECK(r.final_state.at("repository").at("ns").at("current_ns_il") == "NS-IL#3");
}

TEST_CASE("pure addition skips the release phase")
{
    const sim::RunResult r = audited_run(sample_scenario("indicator"));
    REQUIRE(r.decisions.size() == 1);
    CHECK(r.decisions[0].target_ns_il == "NS-IL#2");
    REQUIRE_FALSE(r.operations.empty());
    const auto s = steps(r.operations[0]);
    CHECK(s.front() == 5);
    CHECK(std::count(s.begin(), s.end(), 19) >= 1);
    CHECK(*std::max_element(s.begin(), s.end()) == 19);
}

TEST_CASE("quiet workload stays in monitoring")
{
    const sim::RunResult r = audited_run(sample_scenario("quiet"));
    CHECK(r.operations.empty());
    CHECK(named(r, "ScaleVnfToLevelRequest").empty());
    for (const auto& rec : r.trace.records()) {
        REQUIRE(rec.step);
        CHECK(*rec.step <= 3);
    }
    CHECK(r.final_state.at("repository").at("ns").at("current_ns_il") == "NS-IL#1");
}

TEST_CASE("escalation visits every level")
{
    const sim::RunResult r = audited_run(sample_scenario("escalation"));
    std::vector<std::pair<Id, Id>> path;
    for (const auto& d : r.decisions) {
        path.emplace_back(d.current_ns_il, d.target_ns_il);
    }
    CHECK(path == std::vector<std::pair<Id, Id>>{{"NS-IL#1", "NS-IL#2"}, {"NS-IL#2", "NS-IL#3"}, {"NS-IL#3", "NS-IL#4"}});
    CHECK(r.decisions.back().classification == Procedure::add_vnf);
}

TEST_CASE("add then remove a VNF-B instance")
{
    const Scenario sc = sample_scenario("add-remove");
    std::size_t max_b = 0;
    double max_vl = 0;
    const auto r = sim::run_scenario(sc, {}, [&](const sim::World& w, const EventRecord*) {
        max_b = std::max(max_b, w.repo.instances_of("vnf-B").size());
        for (const auto& [id, vl] : w.repo.vls) {
            max_vl = std::max(max_vl, vl.bitrate);
        }
    });
    CHECK(max_b == 2);
    CHECK(max_vl == doctest::Approx(800));
    REQUIRE(r.decisions.size() == 2);
    CHECK(r.decisions[0].classification == Procedure::add_vnf);
    CHECK(r.decisions[1].classification == Procedure::remove_vnf);
    const auto& repo = r.final_state.at("repository");
    CHECK(repo.at("ns").at("current_ns_il") == "NS-IL#3");
    CHECK(repo.at("ns").at("vnf_instance_refs").size() == 3);
}

TEST_CASE("failed operation leaves no net capacity change")
{
    const Scenario sc = sample_scenario("fragmented");
    sim::Simulation s(sc);
    const auto before = s.world().repo.resources.capacity_report();
    TraceAuditor auditor;
    s.run([&](const sim::World& w, const EventRecord* rec) { auditor.observe(w, rec); });
    CHECK(auditor.ok());
    const auto r = s.result();
    CHECK(r.op_failed);
    REQUIRE(r.operations.size() == 1);
    CHECK(r.operations[0].phase == sim::Phase::failed);
    CHECK(r.operations[0].failure.find("grant denied") != std::string::npos);
    const auto after = s.world().repo.resources.capacity_report();
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(before[i].allocated == after[i].allocated);
        CHECK(after[i].reserved.is_zero());
    }
    CHECK(r.final_state.at("repository").at("ns").at("current_ns_il") == "NS-IL#1");
}

TEST_CASE("grant for VDUs outside the decision is denied")
{
    const Scenario sc = sample_scenario("il1-to-il3");
    sim::Simulation s(sc);
    s.run_until(4);
    sim::World& w = s.world();
    REQUIRE(w.op_order.size() == 1);
    const Id op_id = w.op_order[0];
    sim::Message forged{"GrantRequest", w.op(op_id).vnfm, sim::kNfvo, 6, op_id,
                        {{"op_id", op_id}, {"vdu_ids", {"VDU#4"}}, {"internal_vl_ids", nlohmann::json::array()},
                         {"intent", "allocate"}}};
    sim::nfvo_handle(w, forged);
    TraceAuditor auditor;
    s.run([&](const sim::World& world, const EventRecord* rec) { auditor.observe(world, rec); });
    const auto r = s.result();
    CHECK(r.op_failed);
    CHECK(r.operations.at(0).failure.find("do not match") != std::string::npos);
    CHECK(auditor.ok());
    for (const auto& [id, res] : s.world().repo.resources.reservations()) {
        CHECK(res.state != ReservationState::active);
    }
}

TEST_CASE("same seed gives the same trace")
{
    for (const char* name : {"escalation", "quiet", "add-remove"}) {
        const Scenario sc = sample_scenario(name);
        const auto a = sim::run_scenario(sc);
        const auto b = sim::run_scenario(sc);
        CHECK(a.trace.text() == b.trace.text());
        CHECK(a.final_state == b.final_state);
    }
    const Scenario quiet = sample_scenario("quiet");
    sim::RunOptions other;
    other.seed = 12345;
    CHECK(sim::run_scenario(quiet).trace.text() != sim::run_scenario(quiet, other).trace.text());
}

TEST_CASE("messages are checked against their schema")
{
    CHECK_NOTHROW(sim::check_message({"ScaleVnfToLevelResponse", "VNFM-0", "NFVO", 5, "op-1", {{"op_id", "op-1"}}}));
    CHECK_THROWS_AS(sim::check_message({"Nonsense", "a", "b", 1, "", {}}), StateError);
    CHECK_THROWS_AS(sim::check_message({"ScaleVnfToLevelResponse", "a", "b", 5, "op-1", {{"colour", 1}}}), StateError);
    const sim::Message m{"ScaleVnfToLevelResponse", "VNFM-0", "NFVO", 5, "op-1", {{"op_id", "op-1"}}};
    CHECK(sim::digest(m).size() == 16);
    CHECK(sim::digest(m) == sim::digest(m));
    CHECK(sim::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(sim::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("trace lines render all columns")
{
    EventRecord r;
    r.seq = 3;
    r.tick = 7;
    r.src = "NFVO";
    r.dst = "VNFM-0";
    r.message = "GrantResponse";
    r.digest = "0123456789abcdef";
    CHECK(sim::render(r) == "3 7 - NFVO VNFM-0 GrantResponse 0123456789abcdef");
    r.step = 10;
    CHECK(sim::render(r) == "3 7 10 NFVO VNFM-0 GrantResponse 0123456789abcdef");
}
