#pragma once

#include <string>
#include <vector>

#include "nsscale/descriptor.hpp"

namespace nsscale {

struct ValidationEntry {
    std::string kind;    ///< referential-integrity, cardinality, uniqueness, range, rule-syntax, rule-reference, rule-consistency
    std::string path;    ///< e.g. nsd[nsd-x].flavors[f].ns_ils[il].vnf_entries[vnf-B].vnf_il_ref
    std::string message;

    auto operator<=>(const ValidationEntry&) const = default;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries; ///< sorted by (kind, path, message)

    bool empty() const { return entries.empty(); }
};

/// Semantic checks over a loaded catalog. Checks that depend on an
/// unresolved reference are skipped, so one broken field yields one entry.
ValidationReport validate_catalog(const Catalog& catalog);

} // namespace nsscale
