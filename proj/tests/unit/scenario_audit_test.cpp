#include "doctest.h"

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "nsscale/audit.hpp"
#include "nsscale/scenario.hpp"
#include "nsscale/sim/simulator.hpp"

using namespace nsscale;
using namespace nsscale::testing;

TEST_CASE("sample scenarios load and validate")
{
    for (const char* name : {"escalation", "il1-to-il3", "quiet", "add-remove", "fragmented", "indicator"}) {
        CAPTURE(name);
        const Scenario sc = sample_scenario(name);
        CHECK(validate_scenario(sc).empty());
        CHECK(std::is_sorted(sc.topology.vims.begin(), sc.topology.vims.end()));
        CHECK(sc.horizon() > 0);
    }
}

TEST_CASE("scenario parse errors")
{
    nlohmann::json doc = nlohmann::json::parse(read_text(sample_scenario_path("quiet")));
    const std::string base = source_path("data/sample/scenarios");

    nlohmann::json extra = doc;
    extra["colour"] = "red";
    CHECK_THROWS_AS(parse_scenario(extra, base), SyntaxError);

    nlohmann::json missing = doc;
    missing["catalog_refs"] = {"../nowhere"};
    CHECK_THROWS_AS(parse_scenario(missing, base), IoError);

    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST_CASE("scenario-level validation entries")
{
    nlohmann::json doc = nlohmann::json::parse(read_text(sample_scenario_path("quiet")));
    const std::string base = source_path("data/sample/scenarios");
    doc["initial_instance"]["ns_il"] = "NS-IL#9";
    doc["options"]["target_utilization"] = 1.5;
    const ValidationReport report = validate_scenario(parse_scenario(doc, base));
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].kind == "scenario");
    CHECK(report.entries[0].path == "initial_instance.ns_il");
    CHECK(report.entries[1].path == "options.target_utilization");
}

TEST_CASE("workload materialization is seeded")
{
    const Scenario sc = sample_scenario("quiet");
    const auto a = materialize_workload(sc, 1);
    const auto b = materialize_workload(sc, 1);
    const auto c = materialize_workload(sc, 2);
    REQUIRE(a.size() == b.size());
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(event_tick(a[i]) == event_tick(b[i]));
        if (i > 0) {
            CHECK(event_tick(a[i - 1]) <= event_tick(a[i]));
        }
        if (const auto* s = std::get_if<WorkloadSample>(&a[i])) {
            CHECK(s->value == std::get<WorkloadSample>(b[i]).value);
            differs = differs || s->value != std::get<WorkloadSample>(c[i]).value;
        }
    }
    CHECK(differs);
}

TEST_CASE("conservation check detects unbacked allocation")
{
    ResourceInventory clean({{"p", "v", {{"z", {8, 8, 8, 8}, {}, {}}}}});
    clean.allocate("z", {2, 2, 0, 0}, ResourceKind::compute);
    CHECK(check_conservation(clean).empty());

    ResourceInventory broken({{"p", "v", {{"z", {8, 8, 8, 8}, {1, 0, 0, 0}, {}}}}});
    CHECK_FALSE(check_conservation(broken).empty());

    ResourceInventory over({{"p", "v", {{"z", {1, 1, 1, 1}, {}, {2, 0, 0, 0}}}}});
    CHECK_FALSE(check_conservation(over).empty());
}

TEST_CASE("quiescent check on an instantiated world")
{
    const Scenario sc = sample_scenario("il1-to-il3");
    sim::Simulation s(sc);
    CHECK(check_quiescent(s.world()).empty());
    s.run();
    CHECK(check_quiescent(s.world()).empty());
}

TEST_CASE("random scenarios run clean under the auditor")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CAPTURE(seed);
        const Scenario sc = random_scenario(seed);
        CHECK(validate_scenario(sc).empty());
        TraceAuditor auditor;
        const auto r = sim::run_scenario(sc, {}, [&](const sim::World& w, const sim::EventRecord* rec) {
            auditor.observe(w, rec);
        });
        for (const auto& v : auditor.violations()) {
            INFO("seq " << v.seq << ' ' << v.invariant << ": " << v.detail);
            CHECK(false);
        }
        CHECK(auditor.boundaries() > 0);
        CHECK(r.trace.size() > 0);
    }
}
