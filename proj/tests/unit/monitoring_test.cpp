#include <algorithm>

#include "doctest.h"

#include "support/fixtures.hpp"
#include "nsscale/monitoring.hpp"

using namespace nsscale;
using namespace nsscale::testing;

namespace {

MetricDimensionMap sample_dimensions()
{
    return {{"cpu_util", {Dimension::vcpu, Dimension::memory}}, {"vl_util", {Dimension::bandwidth}}};
}

std::vector<Id> sample_resolver(const MonitoredInfoItem& item)
{
    if (item.source == MonitoredSource::ns_metric) {
        return {"ns-1"};
    }
    return {"vnf-B-1"};
}

const RuleVerdict& verdict(const std::vector<RuleVerdict>& vs, const std::string& id)
{
    for (const auto& v : vs) {
        if (v.rule_id == id) {
            return v;
        }
    }
    throw std::runtime_error("no verdict " + id);
}

} // namespace

TEST_CASE("metric store windows and time regression")
{
    MetricStore store;
    store.append({1, "s", "m", 0.1});
    store.append({2, "s", "m", 0.2});
    store.append({2, "s", "m", 0.3});
    store.append({4, "s", "m", 0.4});
    CHECK(store.size() == 4);
    CHECK(store.window("s", "m", 1, 3) == std::vector<double>{0.2, 0.3});
    CHECK(store.window("s", "m", 0, 10).size() == 4);
    CHECK(store.window("s", "other", 0, 10).empty());
    CHECK(store.has_stream("s", "m"));
    CHECK_THROWS_AS(store.append({3, "s", "m", 0.5}), TimeRegressionError);
    store.append({3, "t", "m", 0.5});
}

TEST_CASE("thresholds are edge-triggered")
{
    MetricStore store;
    MetricIngestor ing({{"th", "vnf-B-1", "cpu_util", 0.8, ThresholdDirection::above}}, {});
    auto crossed = [](const std::vector<Notification>& ns) {
        return std::count_if(ns.begin(), ns.end(), [](const Notification& n) {
            return std::holds_alternative<ThresholdCrossed>(n.payload);
        });
    };
    CHECK(crossed(ing.ingest(store, {1, "vnf-B-1", "cpu_util", 0.7})) == 0);
    CHECK(crossed(ing.ingest(store, {2, "vnf-B-1", "cpu_util", 0.9})) == 1);
    CHECK(crossed(ing.ingest(store, {3, "vnf-B-1", "cpu_util", 0.95})) == 0);
    CHECK(crossed(ing.ingest(store, {4, "vnf-B-1", "cpu_util", 0.5})) == 0);
    CHECK(crossed(ing.ingest(store, {5, "vnf-B-1", "cpu_util", 0.85})) == 1);
    CHECK_THROWS_AS(ing.ingest(store, {4, "vnf-B-1", "cpu_util", 0.5}), TimeRegressionError);
}

TEST_CASE("perf reports follow the collection period")
{
    MetricStore store;
    MetricIngestor ing({}, [](const Id&, const std::string&) { return Tick{3}; });
    std::vector<std::size_t> reports;
    for (Tick t = 0; t < 9; ++t) {
        for (const auto& n : ing.ingest(store, {t, "s", "m", 0.5})) {
            if (const auto* p = std::get_if<PerfInfoAvailable>(&n.payload)) {
                reports.push_back(p->samples.size());
            }
        }
    }
    // Boundaries at 0, 3 and 6; each report carries the samples since the last one.
    CHECK(reports == std::vector<std::size_t>{1, 3, 3});
}

TEST_CASE("indicator changes")
{
    const Catalog c = sample_catalog();
    const Notification n = indicator_change(c.vnfd("VNFD#2"), "vnf-B-1", "sessions_active", 1200, 3);
    const auto& p = std::get<VnfIndicatorChange>(n.payload);
    CHECK(p.name == "sessions_active");
    CHECK(p.value == 1200);
    CHECK(n.subject() == "vnf-B-1");
    CHECK(n.name() == "VnfIndicatorNotify");
    CHECK(indicator_change(c.vnfd("VNFD#2"), "vnf-B-1", "sessions_active", 1200, 4).time == 4);
    CHECK_THROWS_AS(indicator_change(c.vnfd("VNFD#2"), "vnf-B-1", "foo", 1, 3), ScenarioError);
}

TEST_CASE("rule verdicts over windowed aggregates")
{
    const Catalog c = sample_catalog();
    const Nsd& nsd = c.nsd("NSD-sample");

    MetricStore high;
    for (Tick t = 1; t <= 3; ++t) {
        high.append({t, "vnf-B-1", "cpu_util", 0.9});
    }
    const auto hv = evaluate_rules(nsd, high, 3, sample_dimensions(), sample_resolver);
    const RuleVerdict& cpu = verdict(hv, "cpu-high");
    CHECK_FALSE(cpu.satisfied);
    CHECK(cpu.violated_dimensions == std::set<Dimension>{Dimension::vcpu, Dimension::memory});
    REQUIRE(cpu.observations.size() == 1);
    CHECK(cpu.observations[0].value == doctest::Approx(0.9));
    CHECK(cpu.observations[0].scope == "VNFD#2");
    CHECK(verdict(hv, "vl-high").missing_refs == std::vector<std::string>{"ns.vl_util"});
    CHECK(verdict(hv, "vl-high").satisfied);

    MetricStore mid;
    for (Tick t = 1; t <= 3; ++t) {
        mid.append({t, "vnf-B-1", "cpu_util", 0.5});
    }
    const auto mv = evaluate_rules(nsd, mid, 3, sample_dimensions(), sample_resolver);
    CHECK(verdict(mv, "cpu-high").satisfied);
    CHECK(verdict(mv, "cpu-high").violated_dimensions.empty());
}

TEST_CASE("scale-in rule needs every metric")
{
    const Catalog c = sample_catalog();
    const Nsd& nsd = c.nsd("NSD-sample");
    MetricStore store;
    for (Tick t = 1; t <= 3; ++t) {
        store.append({t, "vnf-B-1", "cpu_util", 0.2});
    }
    CHECK(verdict(evaluate_rules(nsd, store, 3, sample_dimensions(), sample_resolver), "load-low").satisfied);
    for (Tick t = 1; t <= 3; ++t) {
        store.append({t, "ns-1", "vl_util", 0.1});
    }
    const RuleVerdict& low = verdict(evaluate_rules(nsd, store, 3, sample_dimensions(), sample_resolver), "load-low");
    CHECK_FALSE(low.satisfied);
    CHECK(low.direction == ScalingDirection::scale_in);
    CHECK(low.violated_dimensions.size() == 3);
}

TEST_CASE("cooldown suppresses re-evaluation")
{
    const Catalog c = sample_catalog();
    const Nsd& nsd = c.nsd("NSD-sample");
    MetricStore store;
    for (Tick t = 1; t <= 6; ++t) {
        store.append({t, "vnf-B-1", "cpu_util", 0.9});
    }
    RuleEngine engine(nsd, sample_dimensions(), sample_resolver);

    CHECK_FALSE(verdict(engine.evaluate(store, 3, false), "cpu-high").satisfied);
    CHECK_FALSE(verdict(engine.evaluate(store, 4, false), "cpu-high").in_cooldown);

    CHECK_FALSE(verdict(engine.evaluate(store, 3), "cpu-high").satisfied);
    const RuleVerdict& next = verdict(engine.evaluate(store, 4), "cpu-high");
    CHECK(next.in_cooldown);
    CHECK(next.satisfied);
    CHECK_FALSE(verdict(engine.evaluate(store, 5), "cpu-high").satisfied);
}
