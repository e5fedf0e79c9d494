#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "nsscale/catalog_io.hpp"
#include "nsscale/drpa.hpp"
#include "nsscale/inventory.hpp"
#include "nsscale/monitoring.hpp"
#include "nsscale/validation.hpp"

namespace nsscale {

struct Topology {
    std::vector<Id> vims;      ///< ascending id; VIM-i is vims[i]
    std::vector<NfviPop> pops;
    int vnfm_count = 1;
    int em_count = 1;
    std::map<Id, int> vnfm_assignment; ///< VNFD id -> VNFM index
    std::map<Id, int> em_assignment;   ///< VNFD id -> EM index
};

struct InitialInstance {
    Id ns_instance_id = "ns-1";
    Id nsd_ref;
    Id flavor_ref;
    Id ns_il;
};

struct WorkloadSample {
    Tick tick = 0;
    Id subject;
    std::string metric;
    double value = 0.0;
};

struct WorkloadIndicator {
    Tick tick = 0;
    Id vnf;
    std::string indicator;
    double value = 0.0;
};

/// Uniform samples in [min, max) every `every` ticks over [from, to].
struct SampleGenerator {
    Id subject;
    std::string metric;
    Tick from = 0;
    Tick to = 0;
    Tick every = 1;
    double min = 0.0;
    double max = 1.0;
};

struct ScenarioOptions {
    bool reservation_enabled = true;
    std::uint64_t seed = 0;
    CostModel cost_model;
    double target_utilization = 0.6;
    PlacementConstraints constraints;
};

struct Scenario {
    std::string source;
    Catalog catalog;
    Topology topology;
    InitialInstance initial;
    std::vector<WorkloadSample> samples;
    std::vector<WorkloadIndicator> indicators;
    std::vector<SampleGenerator> generators;
    std::vector<ThresholdSpec> thresholds;
    MetricDimensionMap metric_dimensions;
    ScenarioOptions options;

    const Nsd& nsd() const { return catalog.nsd(initial.nsd_ref); }
    const NsDeploymentFlavor& flavor() const;
    /// Last tick of any workload record or generator.
    Tick horizon() const;
};

/// Parses a scenario document. Relative catalog_refs resolve against `base_dir`.
/// Throws SyntaxError, IoError or DuplicateIdError.
Scenario parse_scenario(const nlohmann::json& doc, const std::string& base_dir, const std::string& source = "");

Scenario load_scenario(const std::string& path);

/// Catalog report plus scenario-level problems (kind "scenario").
ValidationReport validate_scenario(const Scenario& scenario);

using WorkloadEvent = std::variant<WorkloadSample, WorkloadIndicator>;

/// Explicit samples, then generator output, then indicators, stably sorted by tick.
std::vector<WorkloadEvent> materialize_workload(const Scenario& scenario, std::uint64_t seed);

Tick event_tick(const WorkloadEvent& e);

} // namespace nsscale
