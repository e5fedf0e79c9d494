#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nsscale/capacity.hpp"
#include "nsscale/descriptor.hpp"
#include "nsscale/rule.hpp"

namespace nsscale {

struct MetricSample {
    Tick time = 0;
    Id subject; ///< NS or VNF instance id
    std::string name;
    double value = 0.0;

    bool operator==(const MetricSample&) const = default;
};

/// Per-(subject, name) sample streams; times are non-decreasing per stream.
class MetricStore {
public:
    /// Throws TimeRegressionError when `s.time` precedes the stream's last sample.
    void append(const MetricSample& s);

    /// Samples of one stream with time in (after, upto].
    std::vector<double> window(const Id& subject, const std::string& name, Tick after, Tick upto) const;

    bool has_stream(const Id& subject, const std::string& name) const;
    std::size_t size() const { return total_; }

private:
    std::map<std::pair<Id, std::string>, std::vector<MetricSample>> streams_;
    std::size_t total_ = 0;
};

enum class ThresholdDirection { above, below };

std::string_view to_string(ThresholdDirection d);
std::optional<ThresholdDirection> parse_threshold_direction(std::string_view text);

struct ThresholdSpec {
    Id id;
    Id subject;
    std::string metric;
    double bound = 0.0;
    ThresholdDirection direction = ThresholdDirection::above;
};

struct PerfInfoAvailable {
    std::vector<MetricSample> samples;
};

struct ThresholdCrossed {
    Id threshold_id;
    Id subject;
    std::string metric;
    double value = 0.0;
};

struct VnfIndicatorChange {
    Id vnf_instance;
    std::string name;
    double value = 0.0;
};

struct Notification {
    std::variant<PerfInfoAvailable, ThresholdCrossed, VnfIndicatorChange> payload;
    Id origin;
    Tick time = 0;

    std::string_view name() const;
    /// Subject the notification concerns (sample subject, threshold subject or VNF instance).
    const Id& subject() const;
};

/// Turns incoming samples into PerfInfoAvailable/ThresholdCrossed
/// notifications. The origin field is left empty for the caller to fill.
class MetricIngestor {
public:
    using PeriodLookup = std::function<Tick(const Id& subject, const std::string& name)>;

    MetricIngestor(std::vector<ThresholdSpec> thresholds, PeriodLookup period);

    /// Appends to `store`; emits PerfInfoAvailable when the sample reaches a
    /// new collection-period boundary (payload: samples since the previous
    /// report) and one ThresholdCrossed per newly crossed threshold.
    std::vector<Notification> ingest(MetricStore& store, const MetricSample& s);

private:
    struct StreamState {
        std::optional<Tick> last_boundary;
        std::vector<MetricSample> pending;
    };

    std::vector<ThresholdSpec> thresholds_;
    PeriodLookup period_;
    std::map<std::pair<Id, std::string>, StreamState> streams_;
    std::map<Id, bool> crossed_;
};

/// Builds a VnfIndicatorChange. Throws ScenarioError when `vnfd` does not
/// declare the indicator.
Notification indicator_change(const Vnfd& vnfd, const Id& vnf_instance, const std::string& name, double value,
                              Tick time);

struct Observation {
    Id ref;                 ///< monitored item id
    std::string metric;     ///< metric name
    Id scope;               ///< VNFD id or kNsSelf
    double value = 0.0;     ///< aggregate value used by the comparison
    std::vector<Dimension> dimensions;
};

struct RuleVerdict {
    Id rule_id;
    bool satisfied = true;
    bool in_cooldown = false;
    ScalingDirection direction = ScalingDirection::scale_out;
    std::set<Dimension> violated_dimensions; ///< empty when satisfied
    Tick time = 0;
    std::vector<std::string> missing_refs;
    std::vector<Observation> observations;
};

using MetricDimensionMap = std::map<std::string, std::vector<Dimension>>;

/// Evaluates auto-scaling rules over windowed aggregates, with cooldown state.
class RuleEngine {
public:
    /// Returns the stream subjects a monitored item covers at evaluation time.
    using SubjectResolver = std::function<std::vector<Id>(const MonitoredInfoItem&)>;

    RuleEngine(const Nsd& nsd, MetricDimensionMap dimensions, SubjectResolver resolver);

    /// One verdict per rule in declaration order. When `commit` is false the
    /// cooldown state is left untouched.
    std::vector<RuleVerdict> evaluate(const MetricStore& store, Tick now, bool commit = true);

    /// Aggregate of every resolved stream's samples in (now - window, now].
    std::optional<double> aggregate(const MetricStore& store, const Comparison& c, Tick now) const;

private:
    const Nsd* nsd_;
    MetricDimensionMap dimensions_;
    SubjectResolver resolver_;
    std::map<Id, Tick> last_violation_;
};

/// Free-standing form used by tests: evaluates with a fresh engine state.
std::vector<RuleVerdict> evaluate_rules(const Nsd& nsd, const MetricStore& store, Tick now,
                                        const MetricDimensionMap& dimensions,
                                        const RuleEngine::SubjectResolver& resolver);

} // namespace nsscale
