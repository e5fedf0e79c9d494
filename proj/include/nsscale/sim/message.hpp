#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "nsscale/rule.hpp"

namespace nsscale::sim {

/// A workflow message. The payload fields are fixed per message name
/// (see check_message).
struct Message {
    std::string name;
    std::string src;
    std::string dst;
    std::optional<int> step;
    std::string op_id;
    nlohmann::json payload = nlohmann::json::object();
};

/// Throws StateError when the message name is unknown or the payload
/// carries a field the name does not allow.
void check_message(const Message& m);

/// 16 hex digits of FNV-1a 64 over the canonical JSON of {name, op_id, payload}.
std::string digest(const Message& m);

std::uint64_t fnv1a64(std::string_view data);

} // namespace nsscale::sim
