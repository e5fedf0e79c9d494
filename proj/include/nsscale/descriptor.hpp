#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsscale/capacity.hpp"
#include "nsscale/rule.hpp"

namespace nsscale {

using Id = std::string;

/// Subject value of NS-level monitored items.
inline constexpr const char* kNsSelf = "NS-self";

enum class MonitoredSource { ns_metric, vnf_metric, vnf_indicator };

std::string_view to_string(MonitoredSource s);
std::optional<MonitoredSource> parse_monitored_source(std::string_view text);

struct MonitoredInfoItem {
    Id id;
    MonitoredSource source = MonitoredSource::vnf_metric;
    Id subject;             ///< VNFD id, or kNsSelf
    std::string name;       ///< metric or indicator name
    Tick collection_period = 1; ///< logical ticks; ignored for indicators
};

struct AutoScalingRule {
    Id id;
    std::string text;
    std::optional<RuleAst> ast;     ///< absent when `text` failed to parse
    std::string parse_error;
    Tick cooldown = 0;
    ScalingDirection direction_hint = ScalingDirection::scale_out;
    /// Set when the document's explicit cooldown/direction_hint disagree with the rule text.
    std::string inconsistency;
};

struct Vcd {
    Id id;
    double vcpu = 0;
    double memory = 0;
};

struct Vsd {
    Id id;
    double storage = 0;
};

struct Vdu {
    Id id;
    std::string vnfc_name;
    Id vcd_ref;
    std::vector<Id> vsd_refs;
};

struct VlFlavor {
    Id id;
    double latency = 0;
    double jitter = 0;
    int reliability_class = 1;
};

struct Vld {
    Id id;
    std::vector<VlFlavor> flavors;

    const VlFlavor* find_flavor(const Id& flavor_id) const;
};

struct VnfInstantiationLevel {
    Id id;
    std::map<Id, int> counts; ///< VDU id -> VNFC instance count
};

struct VnfDeploymentFlavor {
    Id id;
    std::vector<Id> vdu_refs;
    std::vector<VnfInstantiationLevel> ils;

    const VnfInstantiationLevel* find_il(const Id& il_id) const;
};

struct Vnfd {
    Id id;
    std::vector<Vdu> vdus;
    std::vector<Vcd> vcds;
    std::vector<Vsd> vsds;
    std::vector<Vld> internal_vlds;
    std::vector<std::string> vnf_indicators;
    std::vector<VnfDeploymentFlavor> flavors;

    const Vdu* find_vdu(const Id& vdu_id) const;
    const Vcd* find_vcd(const Id& vcd_id) const;
    const Vsd* find_vsd(const Id& vsd_id) const;
    const VnfDeploymentFlavor* find_flavor(const Id& flavor_id) const;
    bool declares_indicator(const std::string& name) const;
};

struct VnffgDescriptor {
    Id id;
    std::vector<Id> vnfd_refs;
    std::vector<Id> vld_refs;
    std::string plane_label;
};

struct VnfProfile {
    Id id;
    Id vnfd_ref;
    Id vnf_flavor_ref;
    std::vector<Id> allowed_il_refs;
    int min_instances = 0;
    int max_instances = 1;
};

struct VlProfile {
    Id id;
    Id vld_ref;
    Id vl_flavor_ref;
};

struct NsIlVnfEntry {
    Id vnf_il_ref;
    int instance_count = 0;

    bool operator==(const NsIlVnfEntry&) const = default;
};

struct NsInstantiationLevel {
    Id id;
    std::map<Id, NsIlVnfEntry> vnf_entries; ///< VnfProfile id -> entry
    std::map<Id, double> vl_entries;        ///< VlProfile id -> bitrate (Mbit/s)
};

struct NsDeploymentFlavor {
    Id id;
    std::vector<VnfProfile> vnf_profiles;
    std::vector<VlProfile> vl_profiles;
    std::vector<NsInstantiationLevel> ns_ils;

    const VnfProfile* find_vnf_profile(const Id& profile_id) const;
    const VlProfile* find_vl_profile(const Id& profile_id) const;
    const NsInstantiationLevel* find_ns_il(const Id& il_id) const;
    /// Declaration index of an NS-IL, or -1.
    int ns_il_index(const Id& il_id) const;
};

struct Nsd {
    Id id;
    std::string version;
    std::vector<Id> vnfd_refs;
    std::vector<Id> vld_refs;
    std::vector<Id> vnffgd_refs;
    std::vector<MonitoredInfoItem> monitored_info;
    std::vector<AutoScalingRule> auto_scaling_rules;
    std::vector<NsDeploymentFlavor> flavors;

    const NsDeploymentFlavor* find_flavor(const Id& flavor_id) const;
    const MonitoredInfoItem* find_monitored_item(const Id& item_id) const;
};

/// Design-time repository. Immutable after load.
struct Catalog {
    std::map<Id, Nsd> nsds;
    std::map<Id, Vnfd> vnfds;
    std::map<Id, Vld> vlds;
    std::map<Id, VnffgDescriptor> vnffgds;

    const Nsd* find_nsd(const Id& id) const;
    const Vnfd* find_vnfd(const Id& id) const;
    const Vld* find_vld(const Id& id) const;

    const Nsd& nsd(const Id& id) const;     ///< throws UnknownIdError
    const Vnfd& vnfd(const Id& id) const;   ///< throws UnknownIdError
};

} // namespace nsscale
