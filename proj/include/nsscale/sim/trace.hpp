#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsscale/rule.hpp"
#include "nsscale/sim/message.hpp"

namespace nsscale::sim {

struct EventRecord {
    std::uint64_t seq = 0;
    Tick tick = 0;
    std::optional<int> step;
    std::string src;
    std::string dst;
    std::string message;
    std::string digest;
    std::string op_id;
    nlohmann::json payload;
};

/// `seq tick step src dst message digest`, step "-" when absent.
std::string render(const EventRecord& r);

class EventTrace {
public:
    const EventRecord& record(const Message& m, Tick tick);

    const std::vector<EventRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    /// One rendered line per record, each newline-terminated.
    std::string text() const;

private:
    std::vector<EventRecord> records_;
};

} // namespace nsscale::sim
