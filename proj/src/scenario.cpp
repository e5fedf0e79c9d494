#include "nsscale/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "nsscale/errors.hpp"

namespace nsscale {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& message)
{
    throw SyntaxError(source + (where.empty() ? "" : ":" + where), message);
}

void check_keys(const json& obj, const std::string& source, const std::string& where,
                std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) {
        fail(source, where, "expected an object");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
            fail(source, where + "/" + it.key(), "unknown field '" + it.key() + "'");
        }
    }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& source, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(source, where, std::string("missing required field '") + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        fail(source, where + "/" + key, e.what());
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& source, const std::string& where)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    return get<T>(obj, key, source, where);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

const NsDeploymentFlavor& Scenario::flavor() const
{
    const NsDeploymentFlavor* f = nsd().find_flavor(initial.flavor_ref);
    if (!f) {
        throw UnknownIdError("NS flavor", initial.flavor_ref);
    }
    return *f;
}

Tick Scenario::horizon() const
{
    Tick h = 0;
    for (const auto& s : samples) {
        h = std::max(h, s.tick);
    }
    for (const auto& i : indicators) {
        h = std::max(h, i.tick);
    }
    for (const auto& g : generators) {
        h = std::max(h, g.to);
    }
    return h;
}

Scenario parse_scenario(const json& doc, const std::string& base_dir, const std::string& source)
{
    check_keys(doc, source, "",
               {"catalog_refs", "topology", "initial_instance", "workload", "rules", "options", "description"});
    Scenario sc;
    sc.source = source;

    std::vector<DescriptorDocument> docs;
    if (doc.contains("catalog_refs")) {
        const json& refs = doc.at("catalog_refs");
        if (!refs.is_array()) {
            fail(source, "/catalog_refs", "expected an array");
        }
        std::vector<std::string> paths;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (refs[i].is_string()) {
                fs::path p(refs[i].get<std::string>());
                if (p.is_relative()) {
                    p = fs::path(base_dir) / p;
                }
                auto more = read_descriptor_files({p.lexically_normal().string()});
                docs.insert(docs.end(), more.begin(), more.end());
            } else if (refs[i].is_object()) {
                docs.push_back({source + "#/catalog_refs/" + std::to_string(i), refs[i]});
            } else {
                fail(source, "/catalog_refs/" + std::to_string(i), "expected a path or an inline document");
            }
        }
    }
    sc.catalog = load_catalog(docs);

    const json topo = doc.value("topology", json::object());
    check_keys(topo, source, "/topology", {"vims", "vnfms", "ems", "vnfm_assignment", "em_assignment"});
    const json vims = topo.value("vims", json::array());
    for (std::size_t v = 0; v < vims.size(); ++v) {
        const std::string vw = "/topology/vims/" + std::to_string(v);
        check_keys(vims[v], source, vw, {"id", "pops"});
        const Id vim_id = get<std::string>(vims[v], "id", source, vw);
        sc.topology.vims.push_back(vim_id);
        const json pops = vims[v].value("pops", json::array());
        for (std::size_t p = 0; p < pops.size(); ++p) {
            const std::string pw = vw + "/pops/" + std::to_string(p);
            check_keys(pops[p], source, pw, {"id", "zones"});
            NfviPop pop;
            pop.id = get<std::string>(pops[p], "id", source, pw);
            pop.vim_ref = vim_id;
            const json zones = pops[p].value("zones", json::array());
            for (std::size_t z = 0; z < zones.size(); ++z) {
                const std::string zw = pw + "/zones/" + std::to_string(z);
                check_keys(zones[z], source, zw, {"id", "total"});
                ResourceZone zone;
                zone.id = get<std::string>(zones[z], "id", source, zw);
                try {
                    zone.total = zones[z].at("total").get<CapacityVector>();
                } catch (const json::exception& e) {
                    fail(source, zw + "/total", e.what());
                } catch (const SyntaxError& e) {
                    fail(source, zw + "/total", e.what());
                }
                pop.zones.push_back(std::move(zone));
            }
            sc.topology.pops.push_back(std::move(pop));
        }
    }
    std::sort(sc.topology.vims.begin(), sc.topology.vims.end());
    sc.topology.vnfm_count = get_or<int>(topo, "vnfms", 1, source, "/topology");
    sc.topology.em_count = get_or<int>(topo, "ems", 1, source, "/topology");
    sc.topology.vnfm_assignment =
        get_or<std::map<Id, int>>(topo, "vnfm_assignment", {}, source, "/topology");
    sc.topology.em_assignment = get_or<std::map<Id, int>>(topo, "em_assignment", {}, source, "/topology");

    const json init = doc.value("initial_instance", json::object());
    check_keys(init, source, "/initial_instance", {"ns_instance_id", "nsd_ref", "flavor_ref", "ns_il"});
    sc.initial.ns_instance_id = get_or<std::string>(init, "ns_instance_id", "ns-1", source, "/initial_instance");
    sc.initial.nsd_ref = get<std::string>(init, "nsd_ref", source, "/initial_instance");
    sc.initial.flavor_ref = get<std::string>(init, "flavor_ref", source, "/initial_instance");
    sc.initial.ns_il = get<std::string>(init, "ns_il", source, "/initial_instance");

    const json wl = doc.value("workload", json::object());
    check_keys(wl, source, "/workload", {"samples", "indicators", "generators"});
    const json samples = wl.value("samples", json::array());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string w = "/workload/samples/" + std::to_string(i);
        check_keys(samples[i], source, w, {"tick", "subject", "metric", "value"});
        sc.samples.push_back({get<Tick>(samples[i], "tick", source, w), get<std::string>(samples[i], "subject", source, w),
                              get<std::string>(samples[i], "metric", source, w),
                              get<double>(samples[i], "value", source, w)});
    }
    const json indicators = wl.value("indicators", json::array());
    for (std::size_t i = 0; i < indicators.size(); ++i) {
        const std::string w = "/workload/indicators/" + std::to_string(i);
        check_keys(indicators[i], source, w, {"tick", "vnf", "indicator", "value"});
        sc.indicators.push_back({get<Tick>(indicators[i], "tick", source, w),
                                 get<std::string>(indicators[i], "vnf", source, w),
                                 get<std::string>(indicators[i], "indicator", source, w),
                                 get<double>(indicators[i], "value", source, w)});
    }
    const json generators = wl.value("generators", json::array());
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const std::string w = "/workload/generators/" + std::to_string(i);
        const json& g = generators[i];
        check_keys(g, source, w, {"subject", "metric", "from", "to", "every", "min", "max"});
        sc.generators.push_back({get<std::string>(g, "subject", source, w), get<std::string>(g, "metric", source, w),
                                 get<Tick>(g, "from", source, w), get<Tick>(g, "to", source, w),
                                 get_or<Tick>(g, "every", 1, source, w), get<double>(g, "min", source, w),
                                 get<double>(g, "max", source, w)});
    }

    const json rules = doc.value("rules", json::object());
    check_keys(rules, source, "/rules", {"thresholds", "metric_dimensions"});
    const json thresholds = rules.value("thresholds", json::array());
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const std::string w = "/rules/thresholds/" + std::to_string(i);
        check_keys(thresholds[i], source, w, {"id", "subject", "metric", "bound", "direction"});
        ThresholdSpec t;
        t.id = get<std::string>(thresholds[i], "id", source, w);
        t.subject = get<std::string>(thresholds[i], "subject", source, w);
        t.metric = get<std::string>(thresholds[i], "metric", source, w);
        t.bound = get<double>(thresholds[i], "bound", source, w);
        auto dir = parse_threshold_direction(get_or<std::string>(thresholds[i], "direction", "above", source, w));
        if (!dir) {
            fail(source, w + "/direction", "expected above or below");
        }
        t.direction = *dir;
        sc.thresholds.push_back(std::move(t));
    }
    if (rules.contains("metric_dimensions")) {
        const json& md = rules.at("metric_dimensions");
        if (!md.is_object()) {
            fail(source, "/rules/metric_dimensions", "expected an object");
        }
        for (auto it = md.begin(); it != md.end(); ++it) {
            std::vector<Dimension> dims;
            if (!it->is_array()) {
                fail(source, "/rules/metric_dimensions/" + it.key(), "expected an array of dimensions");
            }
            for (const auto& d : *it) {
                auto dim = d.is_string() ? parse_dimension(d.get<std::string>()) : std::nullopt;
                if (!dim) {
                    fail(source, "/rules/metric_dimensions/" + it.key(), "unknown dimension " + d.dump());
                }
                dims.push_back(*dim);
            }
            sc.metric_dimensions[it.key()] = std::move(dims);
        }
    }

    const json opts = doc.value("options", json::object());
    check_keys(opts, source, "/options",
               {"reservation_enabled", "seed", "cost_weights", "target_utilization", "placement_constraints"});
    sc.options.reservation_enabled = get_or<bool>(opts, "reservation_enabled", true, source, "/options");
    sc.options.seed = get_or<std::uint64_t>(opts, "seed", 0, source, "/options");
    sc.options.target_utilization = get_or<double>(opts, "target_utilization", 0.6, source, "/options");
    if (opts.contains("cost_weights")) {
        try {
            sc.options.cost_model.weights = opts.at("cost_weights").get<CapacityVector>();
        } catch (const std::exception& e) {
            fail(source, "/options/cost_weights", e.what());
        }
    }
    if (opts.contains("placement_constraints")) {
        const json& pc = opts.at("placement_constraints");
        check_keys(pc, source, "/options/placement_constraints", {"anti_affinity"});
        sc.options.constraints.anti_affinity =
            get_or<std::vector<Id>>(pc, "anti_affinity", {}, source, "/options/placement_constraints");
    }
    return sc;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw SyntaxError(path, e.what());
    }
    return parse_scenario(doc, fs::path(path).parent_path().string(), path);
}

ValidationReport validate_scenario(const Scenario& sc)
{
    ValidationReport report = validate_catalog(sc.catalog);
    auto add = [&](const std::string& path, const std::string& message) {
        report.entries.push_back({"scenario", path, message});
    };

    const Nsd* nsd = sc.catalog.find_nsd(sc.initial.nsd_ref);
    if (!nsd) {
        add("initial_instance.nsd_ref", "unknown NSD '" + sc.initial.nsd_ref + "'");
    } else if (const NsDeploymentFlavor* f = nsd->find_flavor(sc.initial.flavor_ref); !f) {
        add("initial_instance.flavor_ref", "unknown NS flavor '" + sc.initial.flavor_ref + "'");
    } else {
        if (!f->find_ns_il(sc.initial.ns_il)) {
            add("initial_instance.ns_il", "NS-IL '" + sc.initial.ns_il + "' is not in flavor '" + f->id + "'");
        }
        for (const auto& p : sc.options.constraints.anti_affinity) {
            if (!f->find_vnf_profile(p)) {
                add("options.placement_constraints.anti_affinity", "unknown VNF profile '" + p + "'");
            }
        }
    }

    if (sc.topology.vims.empty()) {
        add("topology.vims", "at least one VIM is required");
    }
    std::set<Id> vim_ids;
    for (const auto& v : sc.topology.vims) {
        if (!vim_ids.insert(v).second) {
            add("topology.vims[" + v + "]", "duplicate VIM id");
        }
    }
    std::set<Id> pop_ids;
    std::set<Id> zone_ids;
    for (const auto& p : sc.topology.pops) {
        if (!pop_ids.insert(p.id).second) {
            add("topology.pops[" + p.id + "]", "duplicate PoP id");
        }
        for (const auto& z : p.zones) {
            if (!zone_ids.insert(z.id).second) {
                add("topology.zones[" + z.id + "]", "duplicate zone id");
            }
            if (!z.total.is_nonnegative()) {
                add("topology.zones[" + z.id + "].total", "capacity must be >= 0");
            }
        }
    }
    if (sc.topology.vnfm_count < 1) {
        add("topology.vnfms", "at least one VNFM is required");
    }
    if (sc.topology.em_count < 1) {
        add("topology.ems", "at least one EM is required");
    }
    for (const auto& [vnfd, idx] : sc.topology.vnfm_assignment) {
        if (idx < 0 || idx >= sc.topology.vnfm_count) {
            add("topology.vnfm_assignment[" + vnfd + "]", "VNFM index out of range");
        }
    }
    for (const auto& [vnfd, idx] : sc.topology.em_assignment) {
        if (idx < 0 || idx >= sc.topology.em_count) {
            add("topology.em_assignment[" + vnfd + "]", "EM index out of range");
        }
    }
    if (!(sc.options.target_utilization > 0 && sc.options.target_utilization <= 1)) {
        add("options.target_utilization", "must be in (0, 1]");
    }
    const auto& w = sc.options.cost_model.weights;
    if (!w.is_nonnegative() || w.is_zero()) {
        add("options.cost_weights", "weights must be >= 0 with at least one > 0");
    }

    std::map<std::pair<Id, std::string>, Tick> last;
    for (std::size_t i = 0; i < sc.samples.size(); ++i) {
        const auto& s = sc.samples[i];
        auto [it, inserted] = last.emplace(std::make_pair(s.subject, s.metric), s.tick);
        if (!inserted) {
            if (s.tick < it->second) {
                add("workload.samples[" + std::to_string(i) + "]", "time regression for " + s.subject + "/" + s.metric);
            }
            it->second = s.tick;
        }
        if (s.tick < 1) {
            add("workload.samples[" + std::to_string(i) + "]", "ticks start at 1");
        }
    }
    for (std::size_t i = 0; i < sc.indicators.size(); ++i) {
        if (sc.indicators[i].tick < 1) {
            add("workload.indicators[" + std::to_string(i) + "]", "ticks start at 1");
        }
    }
    for (std::size_t i = 0; i < sc.generators.size(); ++i) {
        const auto& g = sc.generators[i];
        if (g.every < 1 || g.from < 1 || g.to < g.from || g.max < g.min) {
            add("workload.generators[" + std::to_string(i) + "]", "invalid generator range");
        }
    }
    std::sort(report.entries.begin(), report.entries.end());
    return report;
}

std::vector<WorkloadEvent> materialize_workload(const Scenario& sc, std::uint64_t seed)
{
    std::vector<WorkloadEvent> events;
    for (const auto& s : sc.samples) {
        events.emplace_back(s);
    }
    std::mt19937_64 rng(seed);
    for (const auto& g : sc.generators) {
        for (Tick t = g.from; t <= g.to; t += std::max<Tick>(1, g.every)) {
            events.emplace_back(WorkloadSample{t, g.subject, g.metric, g.min + (g.max - g.min) * uniform01(rng)});
        }
    }
    for (const auto& i : sc.indicators) {
        events.emplace_back(i);
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const WorkloadEvent& a, const WorkloadEvent& b) { return event_tick(a) < event_tick(b); });
    return events;
}

Tick event_tick(const WorkloadEvent& e)
{
    return std::visit([](const auto& x) { return x.tick; }, e);
}

} // namespace nsscale
