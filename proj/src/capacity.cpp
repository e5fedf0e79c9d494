#include "nsscale/capacity.hpp"

namespace nsscale {

std::string_view to_string(Dimension d)
{
    switch (d) {
    case Dimension::vcpu: return "vcpu";
    case Dimension::memory: return "memory";
    case Dimension::storage: return "storage";
    case Dimension::bandwidth: return "bandwidth";
    }
    return "?";
}

std::optional<Dimension> parse_dimension(std::string_view text)
{
    for (auto d : kAllDimensions) {
        if (to_string(d) == text) {
            return d;
        }
    }
    return std::nullopt;
}

double& CapacityVector::operator[](Dimension d)
{
    switch (d) {
    case Dimension::vcpu: return vcpu;
    case Dimension::memory: return memory;
    case Dimension::storage: return storage;
    case Dimension::bandwidth: break;
    }
    return bandwidth;
}

double CapacityVector::operator[](Dimension d) const
{
    return const_cast<CapacityVector&>(*this)[d];
}

CapacityVector& CapacityVector::operator+=(const CapacityVector& o)
{
    vcpu += o.vcpu;
    memory += o.memory;
    storage += o.storage;
    bandwidth += o.bandwidth;
    return *this;
}

CapacityVector& CapacityVector::operator-=(const CapacityVector& o)
{
    vcpu -= o.vcpu;
    memory -= o.memory;
    storage -= o.storage;
    bandwidth -= o.bandwidth;
    return *this;
}

CapacityVector operator*(double k, const CapacityVector& a)
{
    return {k * a.vcpu, k * a.memory, k * a.storage, k * a.bandwidth};
}

bool CapacityVector::is_zero() const
{
    return vcpu == 0.0 && memory == 0.0 && storage == 0.0 && bandwidth == 0.0;
}

bool CapacityVector::is_nonnegative() const
{
    return vcpu >= 0.0 && memory >= 0.0 && storage >= 0.0 && bandwidth >= 0.0;
}

bool CapacityVector::fits_within(const CapacityVector& bound, double tolerance) const
{
    return !first_excess(bound, tolerance).has_value();
}

std::optional<Dimension> CapacityVector::first_excess(const CapacityVector& bound, double tolerance) const
{
    for (auto d : kAllDimensions) {
        if ((*this)[d] > bound[d] + tolerance) {
            return d;
        }
    }
    return std::nullopt;
}

std::ostream& operator<<(std::ostream& os, const CapacityVector& c)
{
    return os << "(vcpu=" << c.vcpu << ", memory=" << c.memory << ", storage=" << c.storage
              << ", bandwidth=" << c.bandwidth << ")";
}

std::string_view to_string(ResourceKind k)
{
    switch (k) {
    case ResourceKind::compute: return "compute";
    case ResourceKind::storage: return "storage";
    case ResourceKind::network: return "network";
    }
    return "?";
}

std::optional<ResourceKind> parse_resource_kind(std::string_view text)
{
    for (auto k : kAllResourceKinds) {
        if (to_string(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

bool dimension_in_kind(Dimension d, ResourceKind k)
{
    switch (k) {
    case ResourceKind::compute: return d == Dimension::vcpu || d == Dimension::memory;
    case ResourceKind::storage: return d == Dimension::storage;
    case ResourceKind::network: return d == Dimension::bandwidth;
    }
    return false;
}

CapacityVector restrict_to(const CapacityVector& c, ResourceKind k)
{
    CapacityVector out;
    for (auto d : kAllDimensions) {
        if (dimension_in_kind(d, k)) {
            out[d] = c[d];
        }
    }
    return out;
}

void to_json(nlohmann::json& j, const CapacityVector& c)
{
    j = nlohmann::json{{"vcpu", c.vcpu}, {"memory", c.memory}, {"storage", c.storage}, {"bandwidth", c.bandwidth}};
}

void from_json(const nlohmann::json& j, CapacityVector& c)
{
    if (!j.is_object()) {
        throw SyntaxError("", "capacity vector must be an object");
    }
    c = CapacityVector{};
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto d = parse_dimension(it.key());
        if (!d) {
            throw SyntaxError("", "unknown capacity dimension '" + it.key() + "'");
        }
        if (!it->is_number()) {
            throw SyntaxError("", "capacity dimension '" + it.key() + "' must be a number");
        }
        c[*d] = it->get<double>();
    }
}

} // namespace nsscale
