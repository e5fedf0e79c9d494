#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string_view>

#include "json.hpp"

#include "nsscale/errors.hpp"

namespace nsscale {

enum class Dimension { vcpu, memory, storage, bandwidth };

inline constexpr std::array<Dimension, 4> kAllDimensions{
    Dimension::vcpu, Dimension::memory, Dimension::storage, Dimension::bandwidth};

std::string_view to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view text);

/// Slack used whenever a derived (floating) demand is compared against a
/// declared capacity.
inline constexpr double kCapacityTolerance = 1e-9;

/// vCPU count, memory and storage in GiB, bandwidth in Mbit/s. Components
/// are signed so the same type carries net deltas.
struct CapacityVector {
    double vcpu = 0.0;
    double memory = 0.0;
    double storage = 0.0;
    double bandwidth = 0.0;

    double& operator[](Dimension d);
    double operator[](Dimension d) const;

    CapacityVector& operator+=(const CapacityVector& o);
    CapacityVector& operator-=(const CapacityVector& o);

    friend CapacityVector operator+(CapacityVector a, const CapacityVector& b) { return a += b; }
    friend CapacityVector operator-(CapacityVector a, const CapacityVector& b) { return a -= b; }
    friend CapacityVector operator-(const CapacityVector& a) { return CapacityVector{} - a; }
    friend CapacityVector operator*(double k, const CapacityVector& a);

    bool operator==(const CapacityVector&) const = default;

    bool is_zero() const;
    bool is_nonnegative() const;

    /// Componentwise `*this <= bound` within `tolerance`.
    bool fits_within(const CapacityVector& bound, double tolerance = 0.0) const;

    /// First dimension in which `*this` exceeds `bound`, if any.
    std::optional<Dimension> first_excess(const CapacityVector& bound, double tolerance = 0.0) const;
};

std::ostream& operator<<(std::ostream& os, const CapacityVector& c);

enum class ResourceKind { compute, storage, network };

inline constexpr std::array<ResourceKind, 3> kAllResourceKinds{
    ResourceKind::compute, ResourceKind::storage, ResourceKind::network};

std::string_view to_string(ResourceKind k);
std::optional<ResourceKind> parse_resource_kind(std::string_view text);

/// compute owns vcpu+memory, storage owns storage, network owns bandwidth.
bool dimension_in_kind(Dimension d, ResourceKind k);

/// The part of `c` that belongs to `k`; other components zeroed.
CapacityVector restrict_to(const CapacityVector& c, ResourceKind k);

/// Raised when a request exceeds available capacity.
class InsufficientCapacityError : public Error {
public:
    InsufficientCapacityError(Dimension d, const std::string& message)
        : Error(message), dimension_(d) {}

    Dimension dimension() const noexcept { return dimension_; }

private:
    Dimension dimension_;
};

void to_json(nlohmann::json& j, const CapacityVector& c);
void from_json(const nlohmann::json& j, CapacityVector& c);

} // namespace nsscale
