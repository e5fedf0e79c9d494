#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nsscale/descriptor.hpp"

namespace nsscale {

/// One parsed JSON descriptor together with where it came from.
struct DescriptorDocument {
    std::string source;
    nlohmann::json body;
};

/// Reads descriptor documents from files and directories (every `*.json`
/// inside a directory, in name order). A file holds either one document or an
/// array of documents.
///
/// Throws IoError for unreadable paths and SyntaxError for malformed JSON.
std::vector<DescriptorDocument> read_descriptor_files(const std::vector<std::string>& paths);

/// Parses the documents into a Catalog (syntax stage only; semantic checks
/// live in validate_catalog). Rule texts are parsed here; a rule that fails
/// to parse is kept with its error so the validator can report it.
///
/// Throws SyntaxError (with location) or DuplicateIdError.
Catalog load_catalog(const std::vector<DescriptorDocument>& documents);

} // namespace nsscale
