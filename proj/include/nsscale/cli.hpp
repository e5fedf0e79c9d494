#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsscale/descriptor.hpp"

namespace nsscale::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2, kOperationFailed = 3 };

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::string trace_path;
    std::string state_path;
    bool no_reservation = false;
    bool audit = false;
};

int cmd_validate(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& scenario_path, const RunFlags& flags, std::ostream& out, std::ostream& err);
int cmd_graph(const std::vector<std::string>& paths, const std::string& flavor, const std::string& out_path,
              std::ostream& out, std::ostream& err);
int cmd_explain(const std::string& scenario_path, Tick at, const std::string& out_path, std::ostream& out,
                std::ostream& err);

/// Nodes are the flavor's NS-ILs; one edge per ordered pair with the
/// ns_il_delta summary. Throws UnknownIdError for an unknown flavor.
nlohmann::json scaling_graph(const Catalog& catalog, const std::string& flavor);

} // namespace nsscale::cli
