#pragma once

#include <string>
#include <vector>

#include "nsscale/catalog_io.hpp"
#include "nsscale/descriptor.hpp"
#include "nsscale/scenario.hpp"

namespace nsscale::testing {

std::string source_path(const std::string& relative);
std::string sample_catalog_dir();
std::string sample_scenario_path(const std::string& name);
std::string test_data(const std::string& relative);

Catalog sample_catalog();
Scenario sample_scenario(const std::string& name);

std::string read_text(const std::string& path);

/// One fixture variant with a single seeded defect.
struct BrokenCase {
    std::string name;
    std::string kind; ///< expected report entry
    std::string path;
    std::vector<DescriptorDocument> documents;
};

/// Applies each JSON Patch under tests/data/broken to its target fixture file.
std::vector<BrokenCase> broken_cases();

} // namespace nsscale::testing
