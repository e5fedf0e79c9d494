#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsscale/inventory.hpp"
#include "nsscale/sim/world.hpp"

namespace nsscale {

struct AuditViolation {
    std::uint64_t seq = 0; ///< trace record after which it was seen; 0 for workload boundaries
    std::string invariant;
    std::string detail;
};

/// Per-zone conservation checks over an inventory:
/// allocated + reserved + available = total, all nonnegative, allocated
/// equal to the outstanding handles and reserved to the active reservations.
std::vector<std::string> check_conservation(const ResourceInventory& inventory, double tolerance = 1e-6);

/// Quiescent consistency: STARTED multisets equal VNF-IL counts and the
/// per-profile instance counts match the current NS-IL.
std::vector<std::string> check_quiescent(const sim::World& world);

/// Runs the checks at every event boundary of a simulation.
class TraceAuditor {
public:
    void observe(const sim::World& world, const sim::EventRecord* record);

    std::uint64_t boundaries() const { return boundaries_; }
    const std::vector<AuditViolation>& violations() const { return violations_; }
    bool ok() const { return violations_.empty(); }

private:
    std::uint64_t boundaries_ = 0;
    std::vector<AuditViolation> violations_;
};

} // namespace nsscale
