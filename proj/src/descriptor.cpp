#include "nsscale/descriptor.hpp"

#include <algorithm>

#include "nsscale/errors.hpp"

namespace nsscale {

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, const Id& id)
{
    auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.id == id; });
    return it == items.end() ? nullptr : &*it;
}

template <typename T>
const T* find_in_map(const std::map<Id, T>& items, const Id& id)
{
    auto it = items.find(id);
    return it == items.end() ? nullptr : &it->second;
}

} // namespace

std::string_view to_string(MonitoredSource s)
{
    switch (s) {
    case MonitoredSource::ns_metric: return "ns-metric";
    case MonitoredSource::vnf_metric: return "vnf-metric";
    case MonitoredSource::vnf_indicator: return "vnf-indicator";
    }
    return "?";
}

std::optional<MonitoredSource> parse_monitored_source(std::string_view text)
{
    for (auto s : {MonitoredSource::ns_metric, MonitoredSource::vnf_metric, MonitoredSource::vnf_indicator}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

const VlFlavor* Vld::find_flavor(const Id& flavor_id) const { return find_by_id(flavors, flavor_id); }

const VnfInstantiationLevel* VnfDeploymentFlavor::find_il(const Id& il_id) const { return find_by_id(ils, il_id); }

const Vdu* Vnfd::find_vdu(const Id& vdu_id) const { return find_by_id(vdus, vdu_id); }
const Vcd* Vnfd::find_vcd(const Id& vcd_id) const { return find_by_id(vcds, vcd_id); }
const Vsd* Vnfd::find_vsd(const Id& vsd_id) const { return find_by_id(vsds, vsd_id); }
const VnfDeploymentFlavor* Vnfd::find_flavor(const Id& flavor_id) const { return find_by_id(flavors, flavor_id); }

bool Vnfd::declares_indicator(const std::string& name) const
{
    return std::find(vnf_indicators.begin(), vnf_indicators.end(), name) != vnf_indicators.end();
}

const VnfProfile* NsDeploymentFlavor::find_vnf_profile(const Id& profile_id) const
{
    return find_by_id(vnf_profiles, profile_id);
}

const VlProfile* NsDeploymentFlavor::find_vl_profile(const Id& profile_id) const
{
    return find_by_id(vl_profiles, profile_id);
}

const NsInstantiationLevel* NsDeploymentFlavor::find_ns_il(const Id& il_id) const { return find_by_id(ns_ils, il_id); }

int NsDeploymentFlavor::ns_il_index(const Id& il_id) const
{
    for (std::size_t i = 0; i < ns_ils.size(); ++i) {
        if (ns_ils[i].id == il_id) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

const NsDeploymentFlavor* Nsd::find_flavor(const Id& flavor_id) const { return find_by_id(flavors, flavor_id); }

const MonitoredInfoItem* Nsd::find_monitored_item(const Id& item_id) const
{
    return find_by_id(monitored_info, item_id);
}

const Nsd* Catalog::find_nsd(const Id& id) const { return find_in_map(nsds, id); }
const Vnfd* Catalog::find_vnfd(const Id& id) const { return find_in_map(vnfds, id); }
const Vld* Catalog::find_vld(const Id& id) const { return find_in_map(vlds, id); }

const Nsd& Catalog::nsd(const Id& id) const
{
    const Nsd* n = find_nsd(id);
    if (!n) {
        throw UnknownIdError("NSD", id);
    }
    return *n;
}

const Vnfd& Catalog::vnfd(const Id& id) const
{
    const Vnfd* v = find_vnfd(id);
    if (!v) {
        throw UnknownIdError("VNFD", id);
    }
    return *v;
}

} // namespace nsscale
