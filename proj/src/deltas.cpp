#include "nsscale/deltas.hpp"

#include <set>

#include "nsscale/errors.hpp"

namespace nsscale {

namespace {

const NsInstantiationLevel& ns_il_or_throw(const NsDeploymentFlavor& flavor, const Id& id)
{
    const NsInstantiationLevel* il = flavor.find_ns_il(id);
    if (!il) {
        throw UnknownIdError("NS-IL", id);
    }
    return *il;
}

const VnfInstantiationLevel& vnf_il_or_throw(const VnfDeploymentFlavor& flavor, const Id& id)
{
    const VnfInstantiationLevel* il = flavor.find_il(id);
    if (!il) {
        throw UnknownIdError("VNF-IL", id);
    }
    return *il;
}

int count_of(const std::map<Id, int>& counts, const Id& vdu)
{
    auto it = counts.find(vdu);
    return it == counts.end() ? 0 : it->second;
}

NsIlVnfEntry entry_of(const NsInstantiationLevel& il, const Id& profile)
{
    auto it = il.vnf_entries.find(profile);
    return it == il.vnf_entries.end() ? NsIlVnfEntry{} : it->second;
}

double bitrate_of(const NsInstantiationLevel& il, const Id& profile)
{
    auto it = il.vl_entries.find(profile);
    return it == il.vl_entries.end() ? 0.0 : it->second;
}

CapacityVector instances_capacity(const Vnfd& vnfd, const VnfDeploymentFlavor& vf, const NsIlVnfEntry& e)
{
    if (e.instance_count == 0) {
        return {};
    }
    return static_cast<double>(e.instance_count) * vnf_il_capacity(vnfd, vf, e.vnf_il_ref);
}

} // namespace

std::string_view to_string(ProfileChange c)
{
    switch (c) {
    case ProfileChange::unchanged: return "unchanged";
    case ProfileChange::il_change: return "il-change";
    case ProfileChange::add: return "add";
    case ProfileChange::remove: return "remove";
    case ProfileChange::mixed: return "mixed";
    }
    return "?";
}

std::string_view to_string(Procedure p)
{
    switch (p) {
    case Procedure::none: return "none";
    case Procedure::vnf_scaling: return "vnf-scaling";
    case Procedure::add_vnf: return "add-vnf";
    case Procedure::remove_vnf: return "remove-vnf";
    case Procedure::mixed: return "mixed";
    }
    return "?";
}

CapacityVector vdu_requirement(const Vnfd& vnfd, const Vdu& vdu)
{
    CapacityVector c;
    const Vcd* vcd = vnfd.find_vcd(vdu.vcd_ref);
    if (!vcd) {
        throw UnknownIdError("VCD", vdu.vcd_ref);
    }
    c.vcpu = vcd->vcpu;
    c.memory = vcd->memory;
    for (const auto& ref : vdu.vsd_refs) {
        const Vsd* vsd = vnfd.find_vsd(ref);
        if (!vsd) {
            throw UnknownIdError("VSD", ref);
        }
        c.storage += vsd->storage;
    }
    return c;
}

CapacityVector vnf_il_capacity(const Vnfd& vnfd, const VnfDeploymentFlavor& flavor, const Id& il_id)
{
    CapacityVector total;
    for (const auto& [vdu_id, count] : vnf_il_or_throw(flavor, il_id).counts) {
        const Vdu* vdu = vnfd.find_vdu(vdu_id);
        if (!vdu) {
            throw UnknownIdError("VDU", vdu_id);
        }
        total += static_cast<double>(count) * vdu_requirement(vnfd, *vdu);
    }
    return total;
}

IlDelta vnf_il_delta(const Vnfd& vnfd, const VnfDeploymentFlavor& flavor, const Id& from_il, const Id& to_il)
{
    const auto& from = vnf_il_or_throw(flavor, from_il).counts;
    const auto& to = vnf_il_or_throw(flavor, to_il).counts;
    std::set<Id> vdus;
    for (const auto& [k, v] : from) {
        vdus.insert(k);
    }
    for (const auto& [k, v] : to) {
        vdus.insert(k);
    }
    IlDelta d;
    for (const auto& vdu_id : vdus) {
        const int diff = count_of(to, vdu_id) - count_of(from, vdu_id);
        if (diff == 0) {
            continue;
        }
        const Vdu* vdu = vnfd.find_vdu(vdu_id);
        if (!vdu) {
            throw UnknownIdError("VDU", vdu_id);
        }
        if (diff > 0) {
            d.add[vdu_id] = diff;
        } else {
            d.remove[vdu_id] = -diff;
        }
        d.net += static_cast<double>(diff) * vdu_requirement(vnfd, *vdu);
    }
    return d;
}

std::pair<const Vnfd*, const VnfDeploymentFlavor*> resolve_profile(const Catalog& catalog, const VnfProfile& profile)
{
    const Vnfd& vnfd = catalog.vnfd(profile.vnfd_ref);
    const VnfDeploymentFlavor* vf = vnfd.find_flavor(profile.vnf_flavor_ref);
    if (!vf) {
        throw UnknownIdError("VNF flavor", profile.vnf_flavor_ref);
    }
    return {&vnfd, vf};
}

NsIlDelta ns_il_delta(const Catalog& catalog, const NsDeploymentFlavor& flavor, const Id& from_il, const Id& to_il)
{
    const auto& from = ns_il_or_throw(flavor, from_il);
    const auto& to = ns_il_or_throw(flavor, to_il);

    NsIlDelta d;
    d.from = from_il;
    d.to = to_il;
    std::set<ProfileChange> kinds;
    for (const auto& profile : flavor.vnf_profiles) {
        const NsIlVnfEntry a = entry_of(from, profile.id);
        const NsIlVnfEntry b = entry_of(to, profile.id);
        if (a.instance_count == 0 && b.instance_count == 0) {
            continue;
        }
        if (a == b) {
            continue;
        }
        const auto [vnfd, vf] = resolve_profile(catalog, profile);
        ProfileDelta pd;
        pd.profile = profile.id;
        pd.from = a;
        pd.to = b;
        pd.instances_added = std::max(0, b.instance_count - a.instance_count);
        pd.instances_removed = std::max(0, a.instance_count - b.instance_count);
        const bool same_il = a.vnf_il_ref == b.vnf_il_ref || a.instance_count == 0 || b.instance_count == 0;
        if (a.instance_count == b.instance_count) {
            pd.change = ProfileChange::il_change;
            pd.il_delta = vnf_il_delta(*vnfd, *vf, a.vnf_il_ref, b.vnf_il_ref);
            pd.net = static_cast<double>(a.instance_count) * pd.il_delta->net;
        } else {
            if (same_il) {
                pd.change = pd.instances_added > 0 ? ProfileChange::add : ProfileChange::remove;
            } else {
                pd.change = ProfileChange::mixed;
            }
            pd.net = instances_capacity(*vnfd, *vf, b) - instances_capacity(*vnfd, *vf, a);
        }
        kinds.insert(pd.change);
        d.net += pd.net;
        d.profiles.push_back(std::move(pd));
    }
    for (const auto& vl : flavor.vl_profiles) {
        const double a = bitrate_of(from, vl.id);
        const double b = bitrate_of(to, vl.id);
        if (a != b) {
            d.vls.push_back({vl.id, a, b});
            d.net.bandwidth += b - a;
        }
    }

    if (kinds.empty()) {
        d.classification = d.vls.empty() ? Procedure::none : Procedure::mixed;
    } else if (kinds.size() > 1) {
        d.classification = Procedure::mixed;
    } else {
        switch (*kinds.begin()) {
        case ProfileChange::il_change: d.classification = Procedure::vnf_scaling; break;
        case ProfileChange::add: d.classification = Procedure::add_vnf; break;
        case ProfileChange::remove: d.classification = Procedure::remove_vnf; break;
        default: d.classification = Procedure::mixed; break;
        }
    }
    return d;
}

CapacityVector aggregate_capacity(const Catalog& catalog, const NsDeploymentFlavor& flavor, const Id& ns_il)
{
    const auto& il = ns_il_or_throw(flavor, ns_il);
    CapacityVector total;
    for (const auto& [profile_id, entry] : il.vnf_entries) {
        const VnfProfile* profile = flavor.find_vnf_profile(profile_id);
        if (!profile) {
            throw UnknownIdError("VNF profile", profile_id);
        }
        const auto [vnfd, vf] = resolve_profile(catalog, *profile);
        total += instances_capacity(*vnfd, *vf, entry);
    }
    for (const auto& [vl, bitrate] : il.vl_entries) {
        total.bandwidth += bitrate;
    }
    return total;
}

int total_instances(const NsDeploymentFlavor& flavor, const Id& ns_il)
{
    int n = 0;
    for (const auto& [profile_id, entry] : ns_il_or_throw(flavor, ns_il).vnf_entries) {
        n += entry.instance_count;
    }
    return n;
}

} // namespace nsscale
