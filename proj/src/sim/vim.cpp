#include <algorithm>

#include "nsscale/sim/world.hpp"

namespace nsscale::sim {

namespace {

std::vector<const ResourceZone*> zones_in(const World& w, const std::vector<Id>& pops)
{
    std::vector<const ResourceZone*> out;
    for (const auto& p : pops) {
        for (const auto& z : w.repo.resources.pop(p).zones) {
            out.push_back(&z);
        }
    }
    return out;
}

void place_and_reserve(World& w, const Message& m)
{
    const ResourceKind kind = *parse_resource_kind(m.payload.at("kind").get<std::string>());
    const CapacityVector spec = m.payload.at("spec").get<CapacityVector>();
    const auto pops = m.payload.at("placement_constraints").at("pops").get<std::vector<Id>>();
    Message out{"ReserveResponse", m.dst, kNfvo, 9, m.op_id, {{"kind", to_string(kind)}}};
    const auto zone = first_fit_zone(zones_in(w, pops), spec);
    if (!zone) {
        out.payload["error"] = "no zone fits the " + std::string(to_string(kind)) + " reservation";
    } else {
        const Reservation r = w.repo.resources.reserve(*zone, spec, kind);
        out.payload["reservation_id"] = r.id;
        out.payload["zone"] = r.zone_ref;
    }
    w.send(std::move(out));
}

void allocate(World& w, const Message& m)
{
    const ResourceKind kind = *parse_resource_kind(m.payload.at("kind").get<std::string>());
    const std::string requester = m.payload.at("requester");
    const auto& items = m.payload.at("items");
    Message out{"AllocateResponse", m.dst, requester, 13, m.op_id, {}};
    nlohmann::json handles = nlohmann::json::array();
    try {
        if (m.payload.contains("reservation_id")) {
            std::vector<CapacityVector> specs;
            for (const auto& i : items) {
                specs.push_back(i.at("spec").get<CapacityVector>());
            }
            const auto got = w.repo.resources.allocate_from_reservation(m.payload.at("reservation_id"), specs);
            for (std::size_t k = 0; k < got.size(); ++k) {
                handles.push_back({{"key", items[k].at("key")}, {"handle", got[k].id}, {"zone", got[k].zone_ref},
                                   {"kind", to_string(kind)}});
            }
        } else {
            std::vector<Id> taken;
            try {
                for (const auto& i : items) {
                    const CapacityVector spec = i.at("spec").get<CapacityVector>();
                    const auto zone = first_fit_zone(zones_in(w, {i.at("pop").get<Id>()}), spec);
                    if (!zone) {
                        throw InsufficientCapacityError(spec.first_excess(w.repo.resources.pop_available(i.at("pop")))
                                                            .value_or(Dimension::vcpu),
                                                        "no zone in " + i.at("pop").get<std::string>() + " fits " +
                                                            i.at("key").get<std::string>());
                    }
                    const ResourceHandle h = w.repo.resources.allocate(*zone, spec, kind);
                    taken.push_back(h.id);
                    handles.push_back({{"key", i.at("key")}, {"handle", h.id}, {"zone", h.zone_ref},
                                       {"kind", to_string(kind)}});
                }
            } catch (...) {
                for (const auto& h : taken) {
                    w.repo.resources.release(h);
                }
                throw;
            }
        }
        out.payload["handles"] = handles;
    } catch (const Error& e) {
        out.payload["error"] = e.what();
    }
    w.send(std::move(out));
}

void release(World& w, const Message& m)
{
    const auto handles = m.payload.at("handles").get<std::vector<Id>>();
    for (const auto& h : handles) {
        w.repo.resources.release(h);
    }
    w.send(Message{"ReleaseResponse", m.dst, m.payload.at("requester"), 27, m.op_id, {{"handles", handles}}});
}

} // namespace

void vim_handle(World& w, const Message& m)
{
    if (!m.op_id.empty()) {
        const ScalingOperation& op = w.op(m.op_id);
        if (op.phase == Phase::failed || op.phase == Phase::completed) {
            return;
        }
    }
    if (m.name == "ReserveRequest") {
        w.send(Message{"VimPlacement", m.dst, m.dst, 8, m.op_id,
                       {{"kind", m.payload.at("kind")},
                        {"spec", m.payload.at("spec")},
                        {"placement_constraints", m.payload.at("placement_constraints")}}});
    } else if (m.name == "VimPlacement") {
        place_and_reserve(w, m);
    } else if (m.name == "AllocateRequest") {
        nlohmann::json payload{{"kind", m.payload.at("kind")}, {"items", m.payload.at("items")}, {"requester", m.src}};
        if (m.payload.contains("reservation_id")) {
            payload["reservation_id"] = m.payload.at("reservation_id");
        }
        w.send(Message{"AllocateResources", m.dst, m.dst, 12, m.op_id, std::move(payload)});
    } else if (m.name == "AllocateResources") {
        allocate(w, m);
    } else if (m.name == "ReleaseRequest") {
        w.send(Message{"DeleteResources", m.dst, m.dst, 26, m.op_id,
                       {{"handles", m.payload.at("handles")}, {"requester", m.src}}});
    } else if (m.name == "DeleteResources") {
        release(w, m);
    }
}

} // namespace nsscale::sim
