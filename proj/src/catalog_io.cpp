#include "nsscale/catalog_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "nsscale/errors.hpp"

namespace nsscale {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw SyntaxError(path.string(), e.what());
    }
}

void append_documents(const fs::path& path, std::vector<DescriptorDocument>& out)
{
    json body = parse_file(path);
    if (body.is_array()) {
        for (std::size_t i = 0; i < body.size(); ++i) {
            out.push_back({path.string() + "#/" + std::to_string(i), std::move(body[i])});
        }
    } else {
        out.push_back({path.string(), std::move(body)});
    }
}

/// Field access with JSON-pointer-style error locations.
class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const
    {
        throw SyntaxError(source_ + (pointer.empty() ? "" : ":" + pointer), message);
    }

    void require_object(const json& j, const std::string& ptr) const
    {
        if (!j.is_object()) {
            fail(ptr, "expected an object");
        }
    }

    void check_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) const
    {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
                fail(ptr + "/" + it.key(), "unknown field '" + it.key() + "'");
            }
        }
    }

    std::string str(const json& obj, const std::string& ptr, const char* key, bool required = true) const
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) {
                fail(ptr, std::string("missing required field '") + key + "'");
            }
            return {};
        }
        if (!it->is_string()) {
            fail(ptr + "/" + key, "expected a string");
        }
        return it->get<std::string>();
    }

    double number(const json& obj, const std::string& ptr, const char* key, double fallback) const
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            return fallback;
        }
        if (!it->is_number()) {
            fail(ptr + "/" + key, "expected a number");
        }
        return it->get<double>();
    }

    long long integer(const json& value, const std::string& ptr) const
    {
        if (!value.is_number_integer()) {
            fail(ptr, "expected an integer");
        }
        return value.get<long long>();
    }

    long long integer(const json& obj, const std::string& ptr, const char* key, long long fallback) const
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            return fallback;
        }
        return integer(*it, ptr + "/" + key);
    }

    std::vector<std::string> strings(const json& obj, const std::string& ptr, const char* key) const
    {
        std::vector<std::string> out;
        auto it = obj.find(key);
        if (it == obj.end()) {
            return out;
        }
        if (!it->is_array()) {
            fail(ptr + "/" + key, "expected an array of strings");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_string()) {
                fail(ptr + "/" + key + "/" + std::to_string(i), "expected a string");
            }
            out.push_back((*it)[i].get<std::string>());
        }
        return out;
    }

    /// Calls `fn(element, pointer)` for each element of an optional array field.
    template <typename Fn>
    void each(const json& obj, const std::string& ptr, const char* key, Fn&& fn) const
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            return;
        }
        if (!it->is_array()) {
            fail(ptr + "/" + key, "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = ptr + "/" + key + "/" + std::to_string(i);
            require_object((*it)[i], p);
            fn((*it)[i], p);
        }
    }

    const json* object_field(const json& obj, const std::string& ptr, const char* key) const
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            return nullptr;
        }
        if (!it->is_object()) {
            fail(ptr + "/" + key, "expected an object");
        }
        return &*it;
    }

private:
    std::string source_;
};

Vld read_vld(const Reader& r, const json& j, const std::string& ptr)
{
    r.check_keys(j, ptr, {"kind", "id", "flavors"});
    Vld vld;
    vld.id = r.str(j, ptr, "id");
    r.each(j, ptr, "flavors", [&](const json& f, const std::string& p) {
        r.check_keys(f, p, {"id", "latency", "jitter", "reliability_class"});
        VlFlavor fl;
        fl.id = r.str(f, p, "id");
        fl.latency = r.number(f, p, "latency", 0.0);
        fl.jitter = r.number(f, p, "jitter", 0.0);
        fl.reliability_class = static_cast<int>(r.integer(f, p, "reliability_class", 1));
        vld.flavors.push_back(fl);
    });
    return vld;
}

Vnfd read_vnfd(const Reader& r, const json& j)
{
    r.check_keys(j, "", {"kind", "id", "vdus", "vcds", "vsds", "internal_vlds", "vnf_indicators", "flavors"});
    Vnfd v;
    v.id = r.str(j, "", "id");
    r.each(j, "", "vdus", [&](const json& x, const std::string& p) {
        r.check_keys(x, p, {"id", "vnfc_name", "vcd_ref", "vsd_refs"});
        v.vdus.push_back({r.str(x, p, "id"), r.str(x, p, "vnfc_name", false), r.str(x, p, "vcd_ref"),
                          r.strings(x, p, "vsd_refs")});
    });
    r.each(j, "", "vcds", [&](const json& x, const std::string& p) {
        r.check_keys(x, p, {"id", "vcpu", "memory"});
        v.vcds.push_back({r.str(x, p, "id"), r.number(x, p, "vcpu", 0.0), r.number(x, p, "memory", 0.0)});
    });
    r.each(j, "", "vsds", [&](const json& x, const std::string& p) {
        r.check_keys(x, p, {"id", "storage"});
        v.vsds.push_back({r.str(x, p, "id"), r.number(x, p, "storage", 0.0)});
    });
    r.each(j, "", "internal_vlds", [&](const json& x, const std::string& p) {
        v.internal_vlds.push_back(read_vld(r, x, p));
    });
    v.vnf_indicators = r.strings(j, "", "vnf_indicators");
    r.each(j, "", "flavors", [&](const json& f, const std::string& p) {
        r.check_keys(f, p, {"id", "vdu_refs", "ils"});
        VnfDeploymentFlavor fl;
        fl.id = r.str(f, p, "id");
        fl.vdu_refs = r.strings(f, p, "vdu_refs");
        r.each(f, p, "ils", [&](const json& il, const std::string& ip) {
            r.check_keys(il, ip, {"id", "counts"});
            VnfInstantiationLevel level;
            level.id = r.str(il, ip, "id");
            if (const json* counts = r.object_field(il, ip, "counts")) {
                for (auto it = counts->begin(); it != counts->end(); ++it) {
                    level.counts[it.key()] = static_cast<int>(r.integer(*it, ip + "/counts/" + it.key()));
                }
            }
            fl.ils.push_back(std::move(level));
        });
        v.flavors.push_back(std::move(fl));
    });
    return v;
}

AutoScalingRule read_rule(const Reader& r, const json& x, const std::string& p)
{
    r.check_keys(x, p, {"id", "text", "cooldown", "direction_hint"});
    AutoScalingRule rule;
    rule.id = r.str(x, p, "id");
    rule.text = r.str(x, p, "text");
    std::optional<Tick> doc_cooldown;
    if (x.contains("cooldown")) {
        doc_cooldown = r.integer(x.at("cooldown"), p + "/cooldown");
    }
    std::optional<ScalingDirection> doc_direction;
    if (x.contains("direction_hint")) {
        const std::string hint = r.str(x, p, "direction_hint");
        doc_direction = parse_scaling_direction(hint);
        if (!doc_direction) {
            r.fail(p + "/direction_hint", "expected scale-out or scale-in");
        }
    }
    try {
        rule.ast = parse_rule(rule.text);
    } catch (const RuleSyntaxError& e) {
        rule.parse_error = e.what();
    }
    if (rule.ast) {
        rule.direction_hint = rule.ast->direction;
        if (doc_direction && *doc_direction != rule.ast->direction) {
            rule.inconsistency = "direction_hint disagrees with rule text";
        }
        if (rule.ast->cooldown) {
            rule.cooldown = *rule.ast->cooldown;
            if (doc_cooldown && *doc_cooldown != *rule.ast->cooldown) {
                rule.inconsistency = "cooldown disagrees with rule text";
            }
        } else {
            rule.cooldown = doc_cooldown.value_or(0);
        }
    } else {
        rule.direction_hint = doc_direction.value_or(ScalingDirection::scale_out);
        rule.cooldown = doc_cooldown.value_or(0);
    }
    return rule;
}

Nsd read_nsd(const Reader& r, const json& j)
{
    r.check_keys(j, "", {"kind", "id", "version", "vnfd_refs", "vld_refs", "vnffgd_refs", "monitored_info",
                         "auto_scaling_rules", "flavors"});
    Nsd nsd;
    nsd.id = r.str(j, "", "id");
    nsd.version = r.str(j, "", "version", false);
    nsd.vnfd_refs = r.strings(j, "", "vnfd_refs");
    nsd.vld_refs = r.strings(j, "", "vld_refs");
    nsd.vnffgd_refs = r.strings(j, "", "vnffgd_refs");
    r.each(j, "", "monitored_info", [&](const json& x, const std::string& p) {
        r.check_keys(x, p, {"id", "source", "subject", "name", "collection_period"});
        MonitoredInfoItem item;
        item.id = r.str(x, p, "id");
        auto source = parse_monitored_source(r.str(x, p, "source"));
        if (!source) {
            r.fail(p + "/source", "expected ns-metric, vnf-metric or vnf-indicator");
        }
        item.source = *source;
        item.subject = r.str(x, p, "subject", false);
        if (item.subject.empty() && item.source == MonitoredSource::ns_metric) {
            item.subject = kNsSelf;
        }
        item.name = r.str(x, p, "name");
        item.collection_period = r.integer(x, p, "collection_period", 1);
        nsd.monitored_info.push_back(std::move(item));
    });
    r.each(j, "", "auto_scaling_rules",
           [&](const json& x, const std::string& p) { nsd.auto_scaling_rules.push_back(read_rule(r, x, p)); });
    r.each(j, "", "flavors", [&](const json& f, const std::string& p) {
        r.check_keys(f, p, {"id", "vnf_profiles", "vl_profiles", "ns_ils"});
        NsDeploymentFlavor fl;
        fl.id = r.str(f, p, "id");
        r.each(f, p, "vnf_profiles", [&](const json& x, const std::string& xp) {
            r.check_keys(x, xp,
                         {"id", "vnfd_ref", "vnf_flavor_ref", "allowed_il_refs", "min_instances", "max_instances"});
            VnfProfile vp;
            vp.id = r.str(x, xp, "id");
            vp.vnfd_ref = r.str(x, xp, "vnfd_ref");
            vp.vnf_flavor_ref = r.str(x, xp, "vnf_flavor_ref");
            vp.allowed_il_refs = r.strings(x, xp, "allowed_il_refs");
            vp.min_instances = static_cast<int>(r.integer(x, xp, "min_instances", 1));
            vp.max_instances = static_cast<int>(r.integer(x, xp, "max_instances", 1));
            fl.vnf_profiles.push_back(std::move(vp));
        });
        r.each(f, p, "vl_profiles", [&](const json& x, const std::string& xp) {
            r.check_keys(x, xp, {"id", "vld_ref", "vl_flavor_ref"});
            fl.vl_profiles.push_back({r.str(x, xp, "id"), r.str(x, xp, "vld_ref"), r.str(x, xp, "vl_flavor_ref")});
        });
        r.each(f, p, "ns_ils", [&](const json& x, const std::string& xp) {
            r.check_keys(x, xp, {"id", "vnf_entries", "vl_entries"});
            NsInstantiationLevel il;
            il.id = r.str(x, xp, "id");
            if (const json* entries = r.object_field(x, xp, "vnf_entries")) {
                for (auto it = entries->begin(); it != entries->end(); ++it) {
                    const std::string ep = xp + "/vnf_entries/" + it.key();
                    r.require_object(*it, ep);
                    r.check_keys(*it, ep, {"vnf_il_ref", "instance_count"});
                    il.vnf_entries[it.key()] = {r.str(*it, ep, "vnf_il_ref"),
                                                static_cast<int>(r.integer(*it, ep, "instance_count", 1))};
                }
            }
            if (const json* entries = r.object_field(x, xp, "vl_entries")) {
                for (auto it = entries->begin(); it != entries->end(); ++it) {
                    if (!it->is_number()) {
                        r.fail(xp + "/vl_entries/" + it.key(), "expected a bitrate number");
                    }
                    il.vl_entries[it.key()] = it->get<double>();
                }
            }
            fl.ns_ils.push_back(std::move(il));
        });
        nsd.flavors.push_back(std::move(fl));
    });
    return nsd;
}

VnffgDescriptor read_vnffgd(const Reader& r, const json& j)
{
    r.check_keys(j, "", {"kind", "id", "vnfd_refs", "vld_refs", "plane_label"});
    return {r.str(j, "", "id"), r.strings(j, "", "vnfd_refs"), r.strings(j, "", "vld_refs"),
            r.str(j, "", "plane_label", false)};
}

template <typename T>
void insert_unique(std::map<Id, T>& into, T value, const std::string& kind)
{
    const Id id = value.id;
    if (!into.emplace(id, std::move(value)).second) {
        throw DuplicateIdError(kind, id);
    }
}

} // namespace

std::vector<DescriptorDocument> read_descriptor_files(const std::vector<std::string>& paths)
{
    std::vector<DescriptorDocument> docs;
    for (const auto& p : paths) {
        const fs::path path(p);
        std::error_code ec;
        if (fs::is_directory(path, ec)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(path)) {
                if (entry.is_regular_file() && entry.path().extension() == ".json") {
                    files.push_back(entry.path());
                }
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                append_documents(f, docs);
            }
        } else if (fs::is_regular_file(path, ec)) {
            append_documents(path, docs);
        } else {
            throw IoError("cannot read '" + p + "'");
        }
    }
    return docs;
}

Catalog load_catalog(const std::vector<DescriptorDocument>& documents)
{
    Catalog catalog;
    for (const auto& doc : documents) {
        const Reader r(doc.source);
        r.require_object(doc.body, "");
        const std::string kind = r.str(doc.body, "", "kind");
        if (kind == "nsd") {
            insert_unique(catalog.nsds, read_nsd(r, doc.body), "NSD");
        } else if (kind == "vnfd") {
            insert_unique(catalog.vnfds, read_vnfd(r, doc.body), "VNFD");
        } else if (kind == "vld") {
            insert_unique(catalog.vlds, read_vld(r, doc.body, ""), "VLD");
        } else if (kind == "vnffgd") {
            insert_unique(catalog.vnffgds, read_vnffgd(r, doc.body), "VNFFGD");
        } else {
            r.fail("/kind", "unknown document kind '" + kind + "'");
        }
    }
    return catalog;
}

} // namespace nsscale
