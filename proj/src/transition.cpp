#include "nsscale/transition.hpp"

#include <algorithm>

#include "nsscale/errors.hpp"

namespace nsscale {

std::string_view to_string(OpKind k)
{
    switch (k) {
    case OpKind::scale_vnf: return "scale-vnf";
    case OpKind::add_vnf: return "add-vnf";
    case OpKind::remove_vnf: return "remove-vnf";
    case OpKind::modify_vl: return "modify-vl";
    }
    return "?";
}

NsSnapshot snapshot_of(const Repository& repo)
{
    NsSnapshot s;
    s.current_ns_il = repo.ns.current_ns_il;
    for (const auto& id : repo.ns.vnf_instance_refs) {
        auto it = repo.vnfs.find(id);
        if (it == repo.vnfs.end()) {
            continue;
        }
        InstanceSnapshot inst{id, it->second.vnf_profile_ref, it->second.current_vnf_il, {}};
        for (const auto& c : it->second.vnfc_instances) {
            if (!c.zone_ref.empty()) {
                inst.pops.insert(repo.resources.pop_of_zone(c.zone_ref).id);
            }
        }
        s.instances.push_back(std::move(inst));
    }
    for (const auto& id : repo.ns.vl_instance_refs) {
        auto it = repo.vls.find(id);
        if (it == repo.vls.end()) {
            continue;
        }
        VlSnapshot vl{id, it->second.vl_profile_ref, it->second.bitrate, {}};
        for (const auto& h : it->second.bandwidth_handles) {
            vl.handle_bitrates.push_back(repo.resources.handle(h).spec.bandwidth);
        }
        s.vls.push_back(std::move(vl));
    }
    return s;
}

namespace {

std::vector<const InstanceSnapshot*> instances_of(const NsSnapshot& s, const Id& profile)
{
    std::vector<const InstanceSnapshot*> out;
    for (const auto& i : s.instances) {
        if (i.profile == profile) {
            out.push_back(&i);
        }
    }
    return out;
}

const VlSnapshot* vl_of(const NsSnapshot& s, const Id& profile)
{
    for (const auto& v : s.vls) {
        if (v.profile == profile) {
            return &v;
        }
    }
    return nullptr;
}

void push_vnfc_additions(std::vector<Addition>& out, const Vnfd& vnfd, const std::string& owner, const Id& profile,
                         const std::map<Id, int>& counts, const std::optional<std::string>& label)
{
    for (const auto& [vdu_id, n] : counts) {
        const Vdu* vdu = vnfd.find_vdu(vdu_id);
        if (!vdu) {
            throw UnknownIdError("VDU", vdu_id);
        }
        for (int k = 1; k <= n; ++k) {
            Addition a;
            a.kind = Addition::Kind::vnfc;
            a.key = owner + "/" + vdu_id + "#" + std::to_string(k);
            a.owner = owner;
            a.profile = profile;
            a.vdu = vdu_id;
            a.spec = vdu_requirement(vnfd, *vdu);
            a.anti_affinity = label;
            out.push_back(std::move(a));
        }
    }
}

VlChange plan_vl(const VlProfile& profile, const VlSnapshot* current, double target)
{
    VlChange c;
    c.vl_profile = profile.id;
    c.vl_instance = current ? current->id : Id{};
    c.from_bitrate = current ? current->bitrate : 0.0;
    c.to_bitrate = target;
    if (target > c.from_bitrate) {
        c.increment = target - c.from_bitrate;
        return c;
    }
    std::vector<double> kept = current ? current->handle_bitrates : std::vector<double>{};
    double sum = 0;
    for (double b : kept) {
        sum += b;
    }
    while (!kept.empty() && sum > target + kCapacityTolerance) {
        sum -= kept.back();
        kept.pop_back();
        ++c.release_count;
    }
    if (sum < target - kCapacityTolerance) {
        c.increment = target - sum;
    }
    return c;
}

} // namespace

TransitionPlan plan_transition(const Catalog& catalog, const NsDeploymentFlavor& flavor, const NsSnapshot& state,
                               const Id& target, const std::vector<Id>& anti_affinity)
{
    const NsIlDelta delta = ns_il_delta(catalog, flavor, state.current_ns_il, target);
    const NsInstantiationLevel& to = *flavor.find_ns_il(target);

    TransitionPlan plan;
    plan.from = state.current_ns_il;
    plan.to = target;
    plan.classification = delta.classification;

    std::vector<PlannedOp> adds;
    std::vector<PlannedOp> scales;
    std::vector<PlannedOp> removes;

    for (const auto& pd : delta.profiles) {
        const VnfProfile& profile = *flavor.find_vnf_profile(pd.profile);
        const auto [vnfd, vf] = resolve_profile(catalog, profile);
        const std::optional<std::string> label =
            std::find(anti_affinity.begin(), anti_affinity.end(), profile.id) != anti_affinity.end()
                ? std::optional<std::string>(profile.id)
                : std::nullopt;
        const auto existing = instances_of(state, profile.id);
        const int from_count = static_cast<int>(existing.size());
        const int to_count = pd.to.instance_count;
        const int kept = std::min(from_count, to_count);

        for (int i = 0; i < kept; ++i) {
            const InstanceSnapshot& inst = *existing[static_cast<std::size_t>(i)];
            if (inst.vnf_il == pd.to.vnf_il_ref) {
                continue;
            }
            PlannedOp op;
            op.kind = OpKind::scale_vnf;
            op.profile = profile.id;
            op.vnfd = vnfd->id;
            op.vnf_flavor = vf->id;
            op.owner = inst.id;
            op.from_il = inst.vnf_il;
            op.to_il = pd.to.vnf_il_ref;
            op.delta = vnf_il_delta(*vnfd, *vf, op.from_il, op.to_il);
            push_vnfc_additions(plan.additions, *vnfd, op.owner, profile.id, op.delta.add, label);
            scales.push_back(std::move(op));
        }
        for (int n = 1; n <= to_count - from_count; ++n) {
            PlannedOp op;
            op.kind = OpKind::add_vnf;
            op.profile = profile.id;
            op.vnfd = vnfd->id;
            op.vnf_flavor = vf->id;
            op.owner = profile.id + "+" + std::to_string(n);
            op.to_il = pd.to.vnf_il_ref;
            const VnfInstantiationLevel* il = vf->find_il(op.to_il);
            if (!il) {
                throw UnknownIdError("VNF-IL", op.to_il);
            }
            op.delta.add = il->counts;
            std::erase_if(op.delta.add, [](const auto& kv) { return kv.second <= 0; });
            op.delta.net = vnf_il_capacity(*vnfd, *vf, op.to_il);
            push_vnfc_additions(plan.additions, *vnfd, op.owner, profile.id, op.delta.add, label);
            adds.push_back(std::move(op));
        }
        for (int i = to_count; i < from_count; ++i) {
            const InstanceSnapshot& inst = *existing[static_cast<std::size_t>(i)];
            PlannedOp op;
            op.kind = OpKind::remove_vnf;
            op.profile = profile.id;
            op.vnfd = vnfd->id;
            op.vnf_flavor = vf->id;
            op.owner = inst.id;
            op.from_il = inst.vnf_il;
            if (const VnfInstantiationLevel* il = vf->find_il(op.from_il)) {
                op.delta.remove = il->counts;
                std::erase_if(op.delta.remove, [](const auto& kv) { return kv.second <= 0; });
                op.delta.net = -vnf_il_capacity(*vnfd, *vf, op.from_il);
            }
            removes.push_back(std::move(op));
        }
    }
    // Removal order: most recently created instances first.
    std::reverse(removes.begin(), removes.end());

    std::vector<VlChange> vl_changes;
    for (const auto& vl : flavor.vl_profiles) {
        const VlSnapshot* current = vl_of(state, vl.id);
        auto it = to.vl_entries.find(vl.id);
        const double target_rate = it == to.vl_entries.end() ? 0.0 : it->second;
        const double current_rate = current ? current->bitrate : 0.0;
        if (target_rate == current_rate) {
            continue;
        }
        VlChange c = plan_vl(vl, current, target_rate);
        if (c.increment > 0) {
            Addition a;
            a.kind = Addition::Kind::vl;
            a.key = "vl/" + vl.id;
            a.profile = vl.id;
            a.spec.bandwidth = c.increment;
            plan.additions.push_back(std::move(a));
        }
        vl_changes.push_back(std::move(c));
    }

    for (auto* group : {&adds, &scales, &removes}) {
        for (auto& op : *group) {
            plan.ops.push_back(std::move(op));
        }
    }
    if (!vl_changes.empty()) {
        if (plan.ops.empty()) {
            PlannedOp op;
            op.kind = OpKind::modify_vl;
            plan.ops.push_back(std::move(op));
        }
        plan.ops.front().vl_changes = std::move(vl_changes);
    }
    return plan;
}

std::vector<const Addition*> additions_of(const TransitionPlan& plan, const PlannedOp& op)
{
    std::vector<const Addition*> out;
    for (const auto& a : plan.additions) {
        if (a.kind == Addition::Kind::vnfc && a.owner == op.owner &&
            (op.kind == OpKind::scale_vnf || op.kind == OpKind::add_vnf)) {
            out.push_back(&a);
        }
    }
    for (const auto& c : op.vl_changes) {
        for (const auto& a : plan.additions) {
            if (a.kind == Addition::Kind::vl && a.profile == c.vl_profile) {
                out.push_back(&a);
            }
        }
    }
    return out;
}

} // namespace nsscale
