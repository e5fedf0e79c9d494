#include "nsscale/audit.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace nsscale {

std::vector<std::string> check_conservation(const ResourceInventory& inventory, double tolerance)
{
    std::map<Id, CapacityVector> handle_sum;
    for (const auto& [id, h] : inventory.handles()) {
        handle_sum[h.zone_ref] += h.spec;
    }
    std::map<Id, CapacityVector> reserved_sum;
    for (const auto& [id, r] : inventory.reservations()) {
        if (r.state == ReservationState::active) {
            reserved_sum[r.zone_ref] += r.spec;
        }
    }

    std::vector<std::string> out;
    for (const auto& pop : inventory.pops()) {
        for (const auto& z : pop.zones) {
            const CapacityVector avail = z.available();
            for (Dimension d : kAllDimensions) {
                auto fail = [&](const std::string& what) {
                    std::ostringstream os;
                    os << z.id << " " << to_string(d) << ": " << what;
                    out.push_back(os.str());
                };
                if (std::abs(z.allocated[d] + z.reserved[d] + avail[d] - z.total[d]) > tolerance) {
                    fail("allocated + reserved + available != total");
                }
                if (z.allocated[d] < -tolerance || z.reserved[d] < -tolerance || avail[d] < -tolerance) {
                    fail("negative component");
                }
                if (std::abs(z.allocated[d] - handle_sum[z.id][d]) > tolerance) {
                    fail("allocated differs from outstanding handles");
                }
                if (std::abs(z.reserved[d] - reserved_sum[z.id][d]) > tolerance) {
                    fail("reserved differs from active reservations");
                }
            }
        }
    }
    return out;
}

std::vector<std::string> check_quiescent(const sim::World& world)
{
    std::vector<std::string> out;
    const NsInstantiationLevel* il = world.flavor.find_ns_il(world.repo.ns.current_ns_il);
    if (!il) {
        out.push_back("current NS-IL '" + world.repo.ns.current_ns_il + "' not in flavor");
        return out;
    }
    for (const auto& profile : world.flavor.vnf_profiles) {
        auto entry = il->vnf_entries.find(profile.id);
        const int expected = entry == il->vnf_entries.end() ? 0 : entry->second.instance_count;
        const auto instances = world.repo.instances_of(profile.id);
        if (static_cast<int>(instances.size()) != expected) {
            out.push_back(profile.id + ": " + std::to_string(instances.size()) + " instances, NS-IL expects " +
                          std::to_string(expected));
        }
        for (const VnfInfo* info : instances) {
            const Vnfd* vnfd = world.catalog.find_vnfd(info->vnfd_ref);
            const VnfDeploymentFlavor* vf = vnfd ? vnfd->find_flavor(info->vnf_flavor_ref) : nullptr;
            const VnfInstantiationLevel* vil = vf ? vf->find_il(info->current_vnf_il) : nullptr;
            if (!vil) {
                out.push_back(info->vnf_instance_id + ": unknown VNF-IL '" + info->current_vnf_il + "'");
                continue;
            }
            std::map<Id, int> want;
            for (const auto& [vdu, n] : vil->counts) {
                if (n > 0) {
                    want[vdu] = n;
                }
            }
            if (info->started_counts() != want) {
                out.push_back(info->vnf_instance_id + ": STARTED instances differ from " + vil->id);
            }
            if (entry != il->vnf_entries.end() && info->current_vnf_il != entry->second.vnf_il_ref) {
                out.push_back(info->vnf_instance_id + ": VNF-IL " + info->current_vnf_il + ", NS-IL expects " +
                              entry->second.vnf_il_ref);
            }
        }
    }
    return out;
}

void TraceAuditor::observe(const sim::World& world, const sim::EventRecord* record)
{
    ++boundaries_;
    const std::uint64_t seq = record ? record->seq : 0;
    for (auto& v : check_conservation(world.repo.resources)) {
        violations_.push_back({seq, "conservation", std::move(v)});
    }
}

} // namespace nsscale
