#include "nsscale/monitoring.hpp"

#include <algorithm>
#include <numeric>

#include "nsscale/errors.hpp"

namespace nsscale {

void MetricStore::append(const MetricSample& s)
{
    auto& stream = streams_[{s.subject, s.name}];
    if (!stream.empty() && s.time < stream.back().time) {
        throw TimeRegressionError("sample for " + s.subject + "/" + s.name + " at tick " + std::to_string(s.time) +
                                  " precedes tick " + std::to_string(stream.back().time));
    }
    stream.push_back(s);
    ++total_;
}

std::vector<double> MetricStore::window(const Id& subject, const std::string& name, Tick after, Tick upto) const
{
    std::vector<double> out;
    auto it = streams_.find({subject, name});
    if (it == streams_.end()) {
        return out;
    }
    for (const auto& s : it->second) {
        if (s.time > after && s.time <= upto) {
            out.push_back(s.value);
        }
    }
    return out;
}

bool MetricStore::has_stream(const Id& subject, const std::string& name) const
{
    return streams_.count({subject, name}) != 0;
}

std::string_view to_string(ThresholdDirection d) { return d == ThresholdDirection::above ? "above" : "below"; }

std::optional<ThresholdDirection> parse_threshold_direction(std::string_view text)
{
    if (text == "above") {
        return ThresholdDirection::above;
    }
    if (text == "below") {
        return ThresholdDirection::below;
    }
    return std::nullopt;
}

std::string_view Notification::name() const
{
    switch (payload.index()) {
    case 0: return "PerfInfoAvailable";
    case 1: return "ThresholdCrossed";
    default: return "VnfIndicatorNotify";
    }
}

const Id& Notification::subject() const
{
    if (const auto* p = std::get_if<PerfInfoAvailable>(&payload)) {
        return p->samples.back().subject;
    }
    if (const auto* t = std::get_if<ThresholdCrossed>(&payload)) {
        return t->subject;
    }
    return std::get<VnfIndicatorChange>(payload).vnf_instance;
}

MetricIngestor::MetricIngestor(std::vector<ThresholdSpec> thresholds, PeriodLookup period)
    : thresholds_(std::move(thresholds)), period_(std::move(period))
{
}

std::vector<Notification> MetricIngestor::ingest(MetricStore& store, const MetricSample& s)
{
    store.append(s);
    std::vector<Notification> out;

    auto& st = streams_[{s.subject, s.name}];
    st.pending.push_back(s);
    const Tick period = std::max<Tick>(1, period_ ? period_(s.subject, s.name) : 1);
    Tick boundary = s.time / period * period;
    if (s.time < 0 && s.time % period != 0) {
        boundary -= period;
    }
    if (!st.last_boundary || boundary > *st.last_boundary) {
        st.last_boundary = boundary;
        out.push_back({PerfInfoAvailable{std::move(st.pending)}, {}, s.time});
        st.pending.clear();
    }

    for (const auto& t : thresholds_) {
        if (t.subject != s.subject || t.metric != s.name) {
            continue;
        }
        const bool now_crossed = t.direction == ThresholdDirection::above ? s.value > t.bound : s.value < t.bound;
        bool& was = crossed_[t.id];
        if (now_crossed && !was) {
            out.push_back({ThresholdCrossed{t.id, s.subject, s.name, s.value}, {}, s.time});
        }
        was = now_crossed;
    }
    return out;
}

Notification indicator_change(const Vnfd& vnfd, const Id& vnf_instance, const std::string& name, double value,
                              Tick time)
{
    if (!vnfd.declares_indicator(name)) {
        throw ScenarioError("indicator '" + name + "' is not declared by " + vnfd.id);
    }
    return {VnfIndicatorChange{vnf_instance, name, value}, {}, time};
}

RuleEngine::RuleEngine(const Nsd& nsd, MetricDimensionMap dimensions, SubjectResolver resolver)
    : nsd_(&nsd), dimensions_(std::move(dimensions)), resolver_(std::move(resolver))
{
}

std::optional<double> RuleEngine::aggregate(const MetricStore& store, const Comparison& c, Tick now) const
{
    const MonitoredInfoItem* item = nsd_->find_monitored_item(c.metric);
    if (!item) {
        return std::nullopt;
    }
    std::vector<double> values;
    for (const auto& subject : resolver_(*item)) {
        auto w = store.window(subject, item->name, now - c.window, now);
        values.insert(values.end(), w.begin(), w.end());
    }
    if (values.empty()) {
        return std::nullopt;
    }
    switch (c.aggregate) {
    case Aggregate::avg: return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    case Aggregate::max: return *std::max_element(values.begin(), values.end());
    case Aggregate::min: return *std::min_element(values.begin(), values.end());
    }
    return std::nullopt;
}

std::vector<RuleVerdict> RuleEngine::evaluate(const MetricStore& store, Tick now, bool commit)
{
    std::vector<RuleVerdict> verdicts;
    for (const auto& rule : nsd_->auto_scaling_rules) {
        RuleVerdict v;
        v.rule_id = rule.id;
        v.time = now;
        v.direction = rule.direction_hint;
        if (!rule.ast) {
            verdicts.push_back(std::move(v));
            continue;
        }
        auto last = last_violation_.find(rule.id);
        if (last != last_violation_.end() && now - last->second < rule.cooldown) {
            v.in_cooldown = true;
            verdicts.push_back(std::move(v));
            continue;
        }

        std::vector<Observation> observations;
        auto lookup = [&](const Comparison& c) -> std::optional<double> {
            auto value = aggregate(store, c, now);
            const MonitoredInfoItem* item = nsd_->find_monitored_item(c.metric);
            if (!value || !item) {
                if (std::find(v.missing_refs.begin(), v.missing_refs.end(), c.metric) == v.missing_refs.end()) {
                    v.missing_refs.push_back(c.metric);
                }
                return value;
            }
            Observation o;
            o.ref = c.metric;
            o.metric = item->name;
            o.scope = item->source == MonitoredSource::ns_metric ? Id(kNsSelf) : item->subject;
            o.value = *value;
            if (auto it = dimensions_.find(item->name); it != dimensions_.end()) {
                o.dimensions = it->second;
            }
            observations.push_back(std::move(o));
            return value;
        };
        const auto holds = evaluate_condition(rule.ast->condition, lookup);
        v.observations = std::move(observations);
        if (holds && *holds) {
            v.satisfied = false;
            for (const auto& o : v.observations) {
                v.violated_dimensions.insert(o.dimensions.begin(), o.dimensions.end());
            }
            if (commit) {
                last_violation_[rule.id] = now;
            }
        }
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

std::vector<RuleVerdict> evaluate_rules(const Nsd& nsd, const MetricStore& store, Tick now,
                                        const MetricDimensionMap& dimensions,
                                        const RuleEngine::SubjectResolver& resolver)
{
    RuleEngine engine(nsd, dimensions, resolver);
    return engine.evaluate(store, now);
}

} // namespace nsscale
