#include <tuple>

#include "nsscale/drpa.hpp"

namespace nsscale {

namespace {

// Capacity summed directly from the descriptors, without the delta helpers.
CapacityVector naive_capacity(const Catalog& catalog, const NsDeploymentFlavor& flavor, const NsInstantiationLevel& il)
{
    CapacityVector c;
    for (const auto& [profile_id, entry] : il.vnf_entries) {
        const VnfProfile* profile = nullptr;
        for (const auto& p : flavor.vnf_profiles) {
            if (p.id == profile_id) {
                profile = &p;
            }
        }
        const Vnfd& vnfd = catalog.vnfds.at(profile->vnfd_ref);
        for (const auto& vf : vnfd.flavors) {
            if (vf.id != profile->vnf_flavor_ref) {
                continue;
            }
            for (const auto& vil : vf.ils) {
                if (vil.id != entry.vnf_il_ref) {
                    continue;
                }
                for (const auto& [vdu_id, n] : vil.counts) {
                    for (const auto& vdu : vnfd.vdus) {
                        if (vdu.id != vdu_id) {
                            continue;
                        }
                        for (const auto& vcd : vnfd.vcds) {
                            if (vcd.id == vdu.vcd_ref) {
                                c.vcpu += entry.instance_count * n * vcd.vcpu;
                                c.memory += entry.instance_count * n * vcd.memory;
                            }
                        }
                        for (const auto& ref : vdu.vsd_refs) {
                            for (const auto& vsd : vnfd.vsds) {
                                if (vsd.id == ref) {
                                    c.storage += entry.instance_count * n * vsd.storage;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for (const auto& [vl, rate] : il.vl_entries) {
        c.bandwidth += rate;
    }
    return c;
}

double naive_cost(const CostModel& m, const CapacityVector& c)
{
    return m.weights.vcpu * c.vcpu + m.weights.memory * c.memory + m.weights.storage * c.storage +
           m.weights.bandwidth * c.bandwidth;
}

bool covers(const CapacityVector& have, const CapacityVector& need)
{
    return need.vcpu <= have.vcpu + kCapacityTolerance && need.memory <= have.memory + kCapacityTolerance &&
           need.storage <= have.storage + kCapacityTolerance && need.bandwidth <= have.bandwidth + kCapacityTolerance;
}

bool naive_first_fit(const std::vector<Addition>& additions, std::vector<PopCapacity> pops,
                     std::vector<Presence> present)
{
    // Selection sort by PoP id keeps this independent of std::sort usage elsewhere.
    for (std::size_t i = 0; i < pops.size(); ++i) {
        for (std::size_t j = i + 1; j < pops.size(); ++j) {
            if (pops[j].pop < pops[i].pop) {
                std::swap(pops[i], pops[j]);
            }
        }
    }
    for (const auto& a : additions) {
        bool placed = false;
        for (auto& pop : pops) {
            bool conflict = false;
            if (a.anti_affinity) {
                for (const auto& p : present) {
                    if (p.label == *a.anti_affinity && p.pop == pop.pop && p.owner != a.owner) {
                        conflict = true;
                    }
                }
            }
            if (conflict || !covers(pop.available, a.spec)) {
                continue;
            }
            pop.available.vcpu -= a.spec.vcpu;
            pop.available.memory -= a.spec.memory;
            pop.available.storage -= a.spec.storage;
            pop.available.bandwidth -= a.spec.bandwidth;
            if (a.anti_affinity) {
                present.push_back({*a.anti_affinity, a.owner, pop.pop});
            }
            placed = true;
            break;
        }
        if (!placed) {
            return false;
        }
    }
    return true;
}

} // namespace

std::optional<Id> exhaustive_select(const DrpaContext& ctx, const DemandEstimate& estimate, ScalingDirection direction,
                                    const CostModel& cost_model)
{
    const NsDeploymentFlavor& flavor = *ctx.flavor;
    const NsInstantiationLevel* current = nullptr;
    for (const auto& il : flavor.ns_ils) {
        if (il.id == ctx.state.current_ns_il) {
            current = &il;
        }
    }
    if (!current) {
        return std::nullopt;
    }
    const double current_cost = naive_cost(cost_model, naive_capacity(*ctx.catalog, flavor, *current));
    const auto existing = presences(ctx.state, ctx.constraints);

    std::optional<std::tuple<double, int, int>> best_key;
    std::optional<Id> best;
    for (int index = 0; index < static_cast<int>(flavor.ns_ils.size()); ++index) {
        const NsInstantiationLevel& il = flavor.ns_ils[static_cast<std::size_t>(index)];
        if (il.id == current->id) {
            continue;
        }
        const CapacityVector cap = naive_capacity(*ctx.catalog, flavor, il);
        if (!covers(cap, estimate.required)) {
            continue;
        }
        const double cost = naive_cost(cost_model, cap);
        if (direction == ScalingDirection::scale_in && !(cost < current_cost)) {
            continue;
        }
        int instances = 0;
        for (const auto& [p, e] : il.vnf_entries) {
            instances += e.instance_count;
        }
        const auto plan = plan_transition(*ctx.catalog, flavor, ctx.state, il.id, ctx.constraints.anti_affinity);
        if (!naive_first_fit(plan.additions, ctx.capacity, existing)) {
            continue;
        }
        const auto key = std::make_tuple(cost, instances, index);
        if (!best_key || key < *best_key) {
            best_key = key;
            best = il.id;
        }
    }
    return best;
}

} // namespace nsscale
