#include "nsscale/validation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace nsscale {

namespace {

std::string fmt_number(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

class Checker {
public:
    explicit Checker(const Catalog& catalog) : catalog_(catalog) {}

    ValidationReport run()
    {
        for (const auto& [id, nsd] : catalog_.nsds) {
            check_nsd(nsd);
        }
        for (const auto& [id, vnfd] : catalog_.vnfds) {
            check_vnfd(vnfd);
        }
        for (const auto& [id, vld] : catalog_.vlds) {
            check_vld(vld, "vld[" + id + "]");
        }
        for (const auto& [id, fg] : catalog_.vnffgds) {
            const std::string base = "vnffgd[" + id + "]";
            for (const auto& ref : fg.vnfd_refs) {
                if (!catalog_.find_vnfd(ref)) {
                    add("referential-integrity", base + ".vnfd_refs[" + ref + "]", "unknown VNFD '" + ref + "'");
                }
            }
            for (const auto& ref : fg.vld_refs) {
                if (!catalog_.find_vld(ref)) {
                    add("referential-integrity", base + ".vld_refs[" + ref + "]", "unknown VLD '" + ref + "'");
                }
            }
        }
        std::sort(report_.entries.begin(), report_.entries.end());
        return std::move(report_);
    }

private:
    void add(std::string kind, std::string path, std::string message)
    {
        report_.entries.push_back({std::move(kind), std::move(path), std::move(message)});
    }

    template <typename T>
    void check_unique(const std::vector<T>& items, const std::string& base, const std::string& what)
    {
        std::set<Id> seen;
        for (const auto& item : items) {
            if (!seen.insert(item.id).second) {
                add("uniqueness", base + "[" + item.id + "]", "duplicate " + what + " id '" + item.id + "'");
            }
        }
    }

    void check_vld(const Vld& vld, const std::string& base)
    {
        if (vld.flavors.empty()) {
            add("cardinality", base + ".flavors", "VLD declares no flavor");
        }
        check_unique(vld.flavors, base + ".flavors", "VL flavor");
        for (const auto& f : vld.flavors) {
            const std::string p = base + ".flavors[" + f.id + "]";
            if (f.latency < 0) {
                add("range", p + ".latency", "latency must be >= 0");
            }
            if (f.jitter < 0) {
                add("range", p + ".jitter", "jitter must be >= 0");
            }
            if (f.reliability_class < 1 || f.reliability_class > 3) {
                add("range", p + ".reliability_class", "reliability_class must be in 1..3");
            }
        }
    }

    void check_vnfd(const Vnfd& v)
    {
        const std::string base = "vnfd[" + v.id + "]";
        check_unique(v.vdus, base + ".vdus", "VDU");
        check_unique(v.vcds, base + ".vcds", "VCD");
        check_unique(v.vsds, base + ".vsds", "VSD");
        check_unique(v.flavors, base + ".flavors", "flavor");
        for (const auto& c : v.vcds) {
            if (c.vcpu < 1) {
                add("range", base + ".vcds[" + c.id + "].vcpu", "vcpu must be >= 1");
            }
            if (!(c.memory > 0)) {
                add("range", base + ".vcds[" + c.id + "].memory", "memory must be > 0");
            }
        }
        for (const auto& s : v.vsds) {
            if (!(s.storage > 0)) {
                add("range", base + ".vsds[" + s.id + "].storage", "storage must be > 0");
            }
        }
        for (const auto& d : v.vdus) {
            const std::string p = base + ".vdus[" + d.id + "]";
            if (!v.find_vcd(d.vcd_ref)) {
                add("referential-integrity", p + ".vcd_ref", "unknown VCD '" + d.vcd_ref + "'");
            }
            for (const auto& s : d.vsd_refs) {
                if (!v.find_vsd(s)) {
                    add("referential-integrity", p + ".vsd_refs[" + s + "]", "unknown VSD '" + s + "'");
                }
            }
        }
        for (const auto& vl : v.internal_vlds) {
            check_vld(vl, base + ".internal_vlds[" + vl.id + "]");
        }
        for (const auto& f : v.flavors) {
            const std::string p = base + ".flavors[" + f.id + "]";
            for (const auto& ref : f.vdu_refs) {
                if (!v.find_vdu(ref)) {
                    add("referential-integrity", p + ".vdu_refs[" + ref + "]", "unknown VDU '" + ref + "'");
                }
            }
            check_unique(f.ils, p + ".ils", "VNF-IL");
            for (const auto& il : f.ils) {
                const std::string ip = p + ".ils[" + il.id + "]";
                bool any_positive = false;
                for (const auto& [vdu, count] : il.counts) {
                    if (std::find(f.vdu_refs.begin(), f.vdu_refs.end(), vdu) == f.vdu_refs.end()) {
                        add("referential-integrity", ip + ".counts[" + vdu + "]",
                            "VDU '" + vdu + "' is not part of flavor '" + f.id + "'");
                        any_positive = true;
                        continue;
                    }
                    if (count < 0) {
                        add("range", ip + ".counts[" + vdu + "]", "VNFC count must be >= 0");
                    }
                    any_positive = any_positive || count > 0;
                }
                if (!any_positive) {
                    add("cardinality", ip + ".counts", "VNF-IL deploys no VNFC instance");
                }
            }
        }
    }

    void check_rule(const Nsd& nsd, const AutoScalingRule& rule, const std::string& p)
    {
        if (!rule.ast) {
            add("rule-syntax", p + ".text", rule.parse_error);
            return;
        }
        if (rule.cooldown < 0) {
            add("range", p + ".cooldown", "cooldown must be >= 0");
        }
        if (!rule.inconsistency.empty()) {
            add("rule-consistency", p, rule.inconsistency);
        }
        for (const auto& ref : rule.ast->metric_refs()) {
            if (!nsd.find_monitored_item(ref)) {
                add("rule-reference", p + ".text", "metric '" + ref + "' is not declared in monitored_info");
            }
        }
    }

    void check_nsd(const Nsd& nsd)
    {
        const std::string base = "nsd[" + nsd.id + "]";
        for (const auto& ref : nsd.vnfd_refs) {
            if (!catalog_.find_vnfd(ref)) {
                add("referential-integrity", base + ".vnfd_refs[" + ref + "]", "unknown VNFD '" + ref + "'");
            }
        }
        for (const auto& ref : nsd.vld_refs) {
            if (!catalog_.find_vld(ref)) {
                add("referential-integrity", base + ".vld_refs[" + ref + "]", "unknown VLD '" + ref + "'");
            }
        }
        for (const auto& ref : nsd.vnffgd_refs) {
            if (!catalog_.vnffgds.count(ref)) {
                add("referential-integrity", base + ".vnffgd_refs[" + ref + "]", "unknown VNFFGD '" + ref + "'");
            }
        }

        check_unique(nsd.monitored_info, base + ".monitored_info", "monitored item");
        for (const auto& item : nsd.monitored_info) {
            const std::string p = base + ".monitored_info[" + item.id + "]";
            if (item.source == MonitoredSource::ns_metric) {
                if (item.subject != kNsSelf) {
                    add("referential-integrity", p + ".subject", "ns-metric subject must be " + std::string(kNsSelf));
                }
            } else {
                const Vnfd* vnfd = catalog_.find_vnfd(item.subject);
                if (!vnfd) {
                    add("referential-integrity", p + ".subject", "unknown VNFD '" + item.subject + "'");
                } else if (item.source == MonitoredSource::vnf_indicator && !vnfd->declares_indicator(item.name)) {
                    add("referential-integrity", p + ".name",
                        "indicator '" + item.name + "' is not declared by '" + vnfd->id + "'");
                }
            }
            if (item.source != MonitoredSource::vnf_indicator && item.collection_period < 1) {
                add("range", p + ".collection_period", "collection_period must be >= 1");
            }
        }

        check_unique(nsd.auto_scaling_rules, base + ".auto_scaling_rules", "rule");
        for (const auto& rule : nsd.auto_scaling_rules) {
            check_rule(nsd, rule, base + ".auto_scaling_rules[" + rule.id + "]");
        }

        if (nsd.flavors.empty()) {
            add("cardinality", base + ".flavors", "NSD declares no flavor");
        }
        check_unique(nsd.flavors, base + ".flavors", "flavor");
        for (const auto& f : nsd.flavors) {
            check_ns_flavor(f, base + ".flavors[" + f.id + "]");
        }
    }

    void check_ns_flavor(const NsDeploymentFlavor& f, const std::string& base)
    {
        check_unique(f.vnf_profiles, base + ".vnf_profiles", "VNF profile");
        check_unique(f.vl_profiles, base + ".vl_profiles", "VL profile");
        check_unique(f.ns_ils, base + ".ns_ils", "NS-IL");

        std::set<Id> broken_profiles;
        for (const auto& vp : f.vnf_profiles) {
            const std::string p = base + ".vnf_profiles[" + vp.id + "]";
            if (vp.min_instances < 0) {
                add("range", p + ".min_instances", "min_instances must be >= 0");
            }
            if (vp.min_instances > vp.max_instances) {
                add("cardinality", p, "min_instances exceeds max_instances");
                broken_profiles.insert(vp.id);
            }
            const Vnfd* vnfd = catalog_.find_vnfd(vp.vnfd_ref);
            if (!vnfd) {
                add("referential-integrity", p + ".vnfd_ref", "unknown VNFD '" + vp.vnfd_ref + "'");
                broken_profiles.insert(vp.id);
                continue;
            }
            const VnfDeploymentFlavor* vf = vnfd->find_flavor(vp.vnf_flavor_ref);
            if (!vf) {
                add("referential-integrity", p + ".vnf_flavor_ref", "unknown VNF flavor '" + vp.vnf_flavor_ref + "'");
                broken_profiles.insert(vp.id);
                continue;
            }
            for (const auto& il : vp.allowed_il_refs) {
                if (!vf->find_il(il)) {
                    add("referential-integrity", p + ".allowed_il_refs[" + il + "]", "unknown VNF-IL '" + il + "'");
                }
            }
        }
        for (const auto& lp : f.vl_profiles) {
            const std::string p = base + ".vl_profiles[" + lp.id + "]";
            const Vld* vld = catalog_.find_vld(lp.vld_ref);
            if (!vld) {
                add("referential-integrity", p + ".vld_ref", "unknown VLD '" + lp.vld_ref + "'");
            } else if (!vld->find_flavor(lp.vl_flavor_ref)) {
                add("referential-integrity", p + ".vl_flavor_ref", "unknown VL flavor '" + lp.vl_flavor_ref + "'");
            }
        }
        for (const auto& il : f.ns_ils) {
            const std::string p = base + ".ns_ils[" + il.id + "]";
            for (const auto& [profile_id, entry] : il.vnf_entries) {
                const std::string ep = p + ".vnf_entries[" + profile_id + "]";
                const VnfProfile* vp = f.find_vnf_profile(profile_id);
                if (!vp) {
                    add("referential-integrity", ep, "unknown VNF profile '" + profile_id + "'");
                    continue;
                }
                if (broken_profiles.count(profile_id)) {
                    continue;
                }
                if (std::find(vp->allowed_il_refs.begin(), vp->allowed_il_refs.end(), entry.vnf_il_ref) ==
                    vp->allowed_il_refs.end()) {
                    add("referential-integrity", ep + ".vnf_il_ref",
                        "VNF-IL '" + entry.vnf_il_ref + "' is not allowed by profile '" + profile_id + "'");
                }
                if (entry.instance_count < vp->min_instances || entry.instance_count > vp->max_instances) {
                    add("cardinality", ep + ".instance_count",
                        "instance_count " + std::to_string(entry.instance_count) + " outside [" +
                            std::to_string(vp->min_instances) + ", " + std::to_string(vp->max_instances) + "]");
                }
            }
            for (const auto& [profile_id, bitrate] : il.vl_entries) {
                const std::string ep = p + ".vl_entries[" + profile_id + "]";
                if (!f.find_vl_profile(profile_id)) {
                    add("referential-integrity", ep, "unknown VL profile '" + profile_id + "'");
                } else if (!(bitrate > 0)) {
                    add("range", ep, "bitrate " + fmt_number(bitrate) + " must be > 0");
                }
            }
        }
    }

    const Catalog& catalog_;
    ValidationReport report_;
};

} // namespace

ValidationReport validate_catalog(const Catalog& catalog) { return Checker(catalog).run(); }

} // namespace nsscale
