#include "nsscale/sim/trace.hpp"

namespace nsscale::sim {

std::string render(const EventRecord& r)
{
    std::string line = std::to_string(r.seq);
    line += ' ';
    line += std::to_string(r.tick);
    line += ' ';
    line += r.step ? std::to_string(*r.step) : "-";
    line += ' ';
    line += r.src;
    line += ' ';
    line += r.dst;
    line += ' ';
    line += r.message;
    line += ' ';
    line += r.digest;
    return line;
}

const EventRecord& EventTrace::record(const Message& m, Tick tick)
{
    EventRecord r;
    r.seq = records_.size() + 1;
    r.tick = tick;
    r.step = m.step;
    r.src = m.src;
    r.dst = m.dst;
    r.message = m.name;
    r.digest = digest(m);
    r.op_id = m.op_id;
    r.payload = m.payload;
    records_.push_back(std::move(r));
    return records_.back();
}

std::string EventTrace::text() const
{
    std::string out;
    for (const auto& r : records_) {
        out += render(r);
        out += '\n';
    }
    return out;
}

} // namespace nsscale::sim
