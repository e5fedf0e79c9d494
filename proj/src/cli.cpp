#include "nsscale/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "nsscale/audit.hpp"
#include "nsscale/catalog_io.hpp"
#include "nsscale/deltas.hpp"
#include "nsscale/scenario.hpp"
#include "nsscale/sim/simulator.hpp"
#include "nsscale/validation.hpp"

namespace nsscale::cli {

using nlohmann::json;

namespace {

void print_report(const ValidationReport& report, std::ostream& out)
{
    for (const auto& e : report.entries) {
        out << e.kind << ' ' << e.path << ' ' << e.message << '\n';
    }
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot write '" + path + "'");
    }
    f << text;
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
}

/// Loads and validates a scenario; returns an exit code on failure.
std::optional<int> load_valid(const std::string& path, std::optional<Scenario>& sc, std::ostream& out,
                              std::ostream& err)
{
    try {
        sc = load_scenario(path);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    const ValidationReport report = validate_scenario(*sc);
    if (!report.empty()) {
        print_report(report, out);
        return kValidation;
    }
    return std::nullopt;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string fmt(const CapacityVector& c)
{
    return "vcpu=" + fmt(c.vcpu) + " memory=" + fmt(c.memory) + " storage=" + fmt(c.storage) +
           " bandwidth=" + fmt(c.bandwidth);
}

void print_decision(const DrpaDecision& d, const std::string& error, Tick at, std::ostream& out)
{
    out << "tick: " << at << '\n';
    out << "current NS-IL: " << d.current_ns_il << '\n';
    out << "verdicts:\n";
    for (const auto& v : d.verdicts) {
        out << "  " << v.rule_id << ' ' << (v.satisfied ? "satisfied" : "violated");
        if (v.in_cooldown) {
            out << " (cooldown)";
        }
        if (!v.satisfied) {
            out << ' ' << to_string(v.direction);
        }
        for (const auto& o : v.observations) {
            out << ' ' << o.ref << '=' << fmt(o.value);
        }
        for (const auto& m : v.missing_refs) {
            out << ' ' << m << "=missing";
        }
        out << '\n';
    }
    if (!error.empty()) {
        out << "action: none\nerror: " << error << '\n';
        return;
    }
    if (d.action == DrpaDecision::Action::none) {
        out << "action: none\n";
        return;
    }
    out << "required: " << fmt(d.estimate.required) << '\n';
    out << "candidates:\n";
    for (const auto& c : d.rationale) {
        out << "  " << c.ns_il << " cost=" << fmt(c.cost) << " instances=" << c.instances
            << " candidate=" << (c.is_candidate ? "yes" : "no") << " placeable=" << (c.placeable ? "yes" : "no");
        if (c.chosen) {
            out << " chosen";
        }
        if (!c.reason.empty()) {
            out << " (" << c.reason << ')';
        }
        out << '\n';
    }
    out << "action: scale\n";
    out << "target NS-IL: " << d.target_ns_il << '\n';
    out << "classification: " << to_string(d.classification) << '\n';
    out << "placement:\n";
    for (const auto& [key, pop] : d.placement) {
        out << "  " << key << " -> " << pop << '\n';
    }
}

} // namespace

int cmd_validate(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err)
{
    Catalog catalog;
    try {
        catalog = load_catalog(read_descriptor_files(paths));
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const SyntaxError& e) {
        out << "syntax " << (e.location().empty() ? "-" : e.location()) << ' ' << e.what() << '\n';
        return kValidation;
    } catch (const DuplicateIdError& e) {
        out << "uniqueness " << e.id() << ' ' << e.what() << '\n';
        return kValidation;
    }
    const ValidationReport report = validate_catalog(catalog);
    print_report(report, out);
    return report.empty() ? kOk : kValidation;
}

int cmd_run(const std::string& scenario_path, const RunFlags& flags, std::ostream& out, std::ostream& err)
{
    std::optional<Scenario> sc;
    if (auto code = load_valid(scenario_path, sc, out, err)) {
        return *code;
    }
    sim::RunOptions options;
    options.seed = flags.seed;
    if (flags.no_reservation) {
        options.reservation_enabled = false;
    }
    TraceAuditor auditor;
    sim::Observer observer;
    if (flags.audit) {
        observer = [&](const sim::World& w, const sim::EventRecord* r) { auditor.observe(w, r); };
    }
    sim::RunResult result;
    try {
        result = sim::run_scenario(*sc, options, observer);
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    try {
        if (!flags.trace_path.empty()) {
            write_file(flags.trace_path, result.trace.text());
        }
        if (!flags.state_path.empty()) {
            write_file(flags.state_path, result.final_state.dump(2) + "\n");
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }

    const auto& ns = result.final_state.at("repository").at("ns");
    out << "events: " << result.trace.size() << '\n';
    out << "decisions: " << result.decisions.size() << '\n';
    for (const auto& d : result.decisions) {
        out << "  " << d.current_ns_il << " -> " << d.target_ns_il << ' ' << to_string(d.classification) << '\n';
    }
    out << "operations: " << result.operations.size() << '\n';
    for (const auto& op : result.operations) {
        out << "  " << op.op_id << ' ' << to_string(op.kind) << ' ' << op.vnf_instance << ' ' << to_string(op.phase);
        if (!op.failure.empty()) {
            out << " (" << op.failure << ')';
        }
        out << '\n';
    }
    out << "final NS-IL: " << ns.at("current_ns_il").get<std::string>() << '\n';
    if (flags.audit) {
        out << "audit: " << auditor.boundaries() << " boundaries, " << auditor.violations().size()
            << " violations\n";
        for (const auto& v : auditor.violations()) {
            out << "  seq " << v.seq << ' ' << v.invariant << ": " << v.detail << '\n';
        }
    }
    if (result.op_failed || !auditor.ok()) {
        return kOperationFailed;
    }
    return kOk;
}

json scaling_graph(const Catalog& catalog, const std::string& flavor_id)
{
    const Nsd* nsd = nullptr;
    const NsDeploymentFlavor* flavor = nullptr;
    for (const auto& [id, n] : catalog.nsds) {
        if (const NsDeploymentFlavor* f = n.find_flavor(flavor_id)) {
            nsd = &n;
            flavor = f;
            break;
        }
    }
    if (!flavor) {
        throw UnknownIdError("NS flavor", flavor_id);
    }
    json nodes = json::array();
    for (const auto& il : flavor->ns_ils) {
        nodes.push_back({{"id", il.id},
                         {"capacity", aggregate_capacity(catalog, *flavor, il.id)},
                         {"instances", total_instances(*flavor, il.id)}});
    }
    json edges = json::array();
    for (const auto& from : flavor->ns_ils) {
        for (const auto& to : flavor->ns_ils) {
            if (from.id == to.id) {
                continue;
            }
            const NsIlDelta d = ns_il_delta(catalog, *flavor, from.id, to.id);
            json profiles = json::array();
            for (const auto& p : d.profiles) {
                profiles.push_back({{"profile", p.profile},
                                    {"change", to_string(p.change)},
                                    {"from", {{"vnf_il", p.from.vnf_il_ref}, {"instances", p.from.instance_count}}},
                                    {"to", {{"vnf_il", p.to.vnf_il_ref}, {"instances", p.to.instance_count}}},
                                    {"net", p.net}});
            }
            json vls = json::array();
            for (const auto& v : d.vls) {
                vls.push_back({{"vl_profile", v.vl_profile}, {"from", v.from_bitrate}, {"to", v.to_bitrate}});
            }
            edges.push_back({{"from", from.id},
                             {"to", to.id},
                             {"classification", to_string(d.classification)},
                             {"net", d.net},
                             {"profiles", profiles},
                             {"vls", vls}});
        }
    }
    return {{"nsd", nsd->id}, {"flavor", flavor->id}, {"nodes", nodes}, {"edges", edges}};
}

int cmd_graph(const std::vector<std::string>& paths, const std::string& flavor, const std::string& out_path,
              std::ostream& out, std::ostream& err)
{
    json graph;
    try {
        const Catalog catalog = load_catalog(read_descriptor_files(paths));
        const ValidationReport report = validate_catalog(catalog);
        if (!report.empty()) {
            print_report(report, out);
            return kValidation;
        }
        graph = scaling_graph(catalog, flavor);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    if (!out_path.empty()) {
        try {
            write_file(out_path, graph.dump(2) + "\n");
        } catch (const IoError& e) {
            err << "error: " << e.what() << '\n';
            return kIo;
        }
    }
    out << "nodes: " << graph.at("nodes").size() << '\n';
    out << "edges: " << graph.at("edges").size() << '\n';
    for (const auto& e : graph.at("edges")) {
        out << "  " << e.at("from").get<std::string>() << " -> " << e.at("to").get<std::string>() << ' '
            << e.at("classification").get<std::string>() << '\n';
    }
    return kOk;
}

int cmd_explain(const std::string& scenario_path, Tick at, const std::string& out_path, std::ostream& out,
                std::ostream& err)
{
    std::optional<Scenario> sc;
    if (auto code = load_valid(scenario_path, sc, out, err)) {
        return *code;
    }
    if (at < 0 || at > sc->horizon()) {
        err << "error: tick " << at << " outside the workload horizon [0, " << sc->horizon() << "]\n";
        return kValidation;
    }
    DrpaDecision decision;
    std::string error;
    try {
        sim::Simulation sim(*sc);
        sim.run_until(at);
        std::vector<RuleVerdict> verdicts;
        decision = sim.probe(verdicts, error);
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    print_decision(decision, error, at, out);
    if (!out_path.empty()) {
        json doc = to_json(decision);
        doc["tick"] = at;
        if (!error.empty()) {
            doc["error"] = error;
        }
        try {
            write_file(out_path, doc.dump(2) + "\n");
        } catch (const IoError& e) {
            err << "error: " << e.what() << '\n';
            return kIo;
        }
    }
    return kOk;
}

} // namespace nsscale::cli
