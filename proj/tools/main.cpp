#include <iostream>

#include "CLI11.hpp"

#include "nsscale/cli.hpp"

int main(int argc, char** argv)
{
    namespace cli = nsscale::cli;

    CLI::App app{"Network-service scaling simulator"};
    app.require_subcommand(1);

    std::vector<std::string> validate_paths;
    auto* validate = app.add_subcommand("validate", "Validate descriptor files or directories");
    validate->add_option("paths", validate_paths, "Descriptor files or directories")->required();

    std::string scenario;
    cli::RunFlags flags;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run a scenario");
    run->add_option("scenario", scenario, "Scenario file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "Workload seed (overrides the scenario)");
    run->add_option("--trace", flags.trace_path, "Write the event trace here");
    run->add_option("--state", flags.state_path, "Write the final state here");
    run->add_flag("--no-reservation", flags.no_reservation, "Skip the reservation sub-phase");
    run->add_flag("--audit", flags.audit, "Check capacity conservation at every event");

    std::vector<std::string> graph_paths;
    std::string flavor;
    std::string graph_out;
    auto* graph = app.add_subcommand("graph", "Emit the scaling graph of an NS flavor");
    graph->add_option("paths", graph_paths, "Descriptor files or directories")->required();
    graph->add_option("--flavor", flavor, "NS deployment flavor id")->required();
    graph->add_option("--out", graph_out, "Write the graph document here");

    std::string explain_scenario;
    std::int64_t at = 0;
    std::string explain_out;
    auto* explain = app.add_subcommand("explain", "Explain the DRPA decision at a tick");
    explain->add_option("scenario", explain_scenario, "Scenario file")->required();
    explain->add_option("--at", at, "Logical tick")->required();
    explain->add_option("--out", explain_out, "Write the decision document here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kValidation;
    }

    if (*validate) {
        return cli::cmd_validate(validate_paths, std::cout, std::cerr);
    }
    if (*run) {
        if (*seed_opt) {
            flags.seed = seed;
        }
        return cli::cmd_run(scenario, flags, std::cout, std::cerr);
    }
    if (*graph) {
        return cli::cmd_graph(graph_paths, flavor, graph_out, std::cout, std::cerr);
    }
    return cli::cmd_explain(explain_scenario, at, explain_out, std::cout, std::cerr);
}
