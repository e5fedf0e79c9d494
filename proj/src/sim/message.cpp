#include "nsscale/sim/message.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "nsscale/errors.hpp"

namespace nsscale::sim {

namespace {

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> table{
        {"PerfInfoAvailable", {"samples", "time"}},
        {"ThresholdCrossed", {"threshold_id", "subject", "metric", "value", "time"}},
        {"VnfIndicatorNotify", {"vnf_instance", "name", "value", "time"}},
        {"DrpaDecision", {"action", "current_ns_il", "target_ns_il", "classification", "selected_vims", "error"}},
        {"ScaleVnfToLevelRequest", {"op", "vnf_instance", "new_vnf_il"}},
        {"ScaleVnfToLevelResponse", {"op_id"}},
        {"GrantRequest", {"op_id", "vdu_ids", "internal_vl_ids", "intent"}},
        {"GrantResponse", {"granted", "reservation_ids", "vim_connectivity", "reason"}},
        {"ReserveRequest", {"kind", "spec", "placement_constraints"}},
        {"VimPlacement", {"kind", "spec", "placement_constraints"}},
        {"ReserveResponse", {"reservation_id", "kind", "zone", "error"}},
        {"AllocateRequest", {"reservation_id", "spec", "kind", "items"}},
        {"AllocateResources", {"reservation_id", "kind", "items", "requester"}},
        {"AllocateResponse", {"handles", "error"}},
        {"ConfigureVnfc", {"instance_ids"}},
        {"VnfInfoUpdate", {"vnf_instance", "change", "instance_ids", "vnf_il"}},
        {"OperateVnfRequest", {"op_id", "target_state"}},
        {"OperateVnfGrant", {"op_id", "target_state"}},
        {"AppConfigure", {"instance_ids", "reason"}},
        {"ReleaseRequest", {"handles"}},
        {"DeleteResources", {"handles", "requester"}},
        {"ReleaseResponse", {"handles"}},
    };
    return table;
}

} // namespace

void check_message(const Message& m)
{
    auto it = schema().find(m.name);
    if (it == schema().end()) {
        throw StateError("unknown message '" + m.name + "'");
    }
    if (!m.payload.is_object()) {
        throw StateError("payload of " + m.name + " must be an object");
    }
    for (auto f = m.payload.begin(); f != m.payload.end(); ++f) {
        if (!it->second.count(f.key())) {
            throw StateError(m.name + " does not carry field '" + f.key() + "'");
        }
    }
}

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest(const Message& m)
{
    const nlohmann::json canonical{{"name", m.name}, {"op_id", m.op_id}, {"payload", m.payload}};
    const std::uint64_t h = fnv1a64(canonical.dump());
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[(h >> ((15 - i) * 4)) & 0xF];
    }
    return out;
}

} // namespace nsscale::sim
