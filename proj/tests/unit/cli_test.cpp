#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "support/fixtures.hpp"
#include "nsscale/cli.hpp"

using namespace nsscale;
using namespace nsscale::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("nsscale-" + name))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& text)
{
    std::ofstream(path) << text;
}

std::size_t lines(const std::string& text)
{
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST_CASE("validate")
{
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_validate({sample_catalog_dir()}, out, err) == cli::kOk);
    CHECK(out.str().empty());

    const auto cases = broken_cases();
    REQUIRE_FALSE(cases.empty());
    TempDir dir("validate");
    std::size_t n = 0;
    for (const auto& d : cases[0].documents) {
        write(dir.file(std::to_string(n++) + ".json"), d.body.dump());
    }
    std::ostringstream bad;
    CHECK(cli::cmd_validate({dir.path.string()}, bad, err) == cli::kValidation);
    CHECK(lines(bad.str()) == 1);
    CHECK(bad.str().find(cases[0].path) != std::string::npos);

    std::ostringstream none;
    CHECK(cli::cmd_validate({"/nonexistent/catalog"}, none, err) == cli::kIo);
}

TEST_CASE("run writes identical traces for the same seed")
{
    TempDir dir("run");
    cli::RunFlags flags;
    flags.seed = 7;
    flags.trace_path = dir.file("a.trace");
    flags.state_path = dir.file("a.json");
    flags.audit = true;
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_run(sample_scenario_path("escalation"), flags, out, err) == cli::kOk);
    CHECK(out.str().find("final NS-IL: NS-IL#4") != std::string::npos);
    CHECK(out.str().find(" 0 violations") != std::string::npos);

    flags.trace_path = dir.file("b.trace");
    flags.state_path = dir.file("b.json");
    CHECK(cli::cmd_run(sample_scenario_path("escalation"), flags, out, err) == cli::kOk);
    CHECK(read_text(dir.file("a.trace")) == read_text(dir.file("b.trace")));
    CHECK(read_text(dir.file("a.json")) == read_text(dir.file("b.json")));
    const auto state = nlohmann::json::parse(read_text(dir.file("a.json")));
    CHECK(state.at("repository").at("ns").at("current_ns_il") == "NS-IL#4");
}

TEST_CASE("run without reservation")
{
    TempDir dir("noreserve");
    cli::RunFlags flags;
    flags.no_reservation = true;
    flags.trace_path = dir.file("t.trace");
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_run(sample_scenario_path("il1-to-il3"), flags, out, err) == cli::kOk);
    const std::string trace = read_text(flags.trace_path);
    CHECK(trace.find("Reserve") == std::string::npos);
    CHECK(trace.find("GrantRequest") != std::string::npos);
}

TEST_CASE("run exit codes")
{
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_run(sample_scenario_path("fragmented"), {}, out, err) == cli::kOperationFailed);
    CHECK(cli::cmd_run("/nonexistent/s.json", {}, out, err) == cli::kIo);
    cli::RunFlags flags;
    flags.trace_path = "/nonexistent/dir/t.trace";
    CHECK(cli::cmd_run(sample_scenario_path("quiet"), flags, out, err) == cli::kIo);
}

TEST_CASE("graph of the sample flavor")
{
    const nlohmann::json g = cli::scaling_graph(sample_catalog(), "NsDF-1");
    CHECK(g.at("nodes").size() == 4);
    REQUIRE(g.at("edges").size() == 12);
    std::map<std::pair<std::string, std::string>, std::string> cls;
    for (const auto& e : g.at("edges")) {
        cls[{e.at("from"), e.at("to")}] = e.at("classification");
    }
    CHECK(cls.at({"NS-IL#1", "NS-IL#2"}) == "vnf-scaling");
    CHECK(cls.at({"NS-IL#1", "NS-IL#3"}) == "vnf-scaling");
    CHECK(cls.at({"NS-IL#2", "NS-IL#3"}) == "vnf-scaling");
    CHECK(cls.at({"NS-IL#3", "NS-IL#4"}) == "add-vnf");
    CHECK(cls.at({"NS-IL#4", "NS-IL#3"}) == "remove-vnf");
    CHECK(cls.at({"NS-IL#1", "NS-IL#4"}) == "mixed");
    CHECK_THROWS_AS(cli::scaling_graph(sample_catalog(), "nope"), UnknownIdError);

    TempDir dir("graph");
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_graph({sample_catalog_dir()}, "NsDF-1", dir.file("g.json"), out, err) == cli::kOk);
    CHECK(nlohmann::json::parse(read_text(dir.file("g.json"))) == g);
}

TEST_CASE("graph of a single-level flavor")
{
    Catalog c = sample_catalog();
    auto& f = c.nsds.at("NSD-sample").flavors[0];
    f.ns_ils.resize(1);
    const nlohmann::json g = cli::scaling_graph(c, "NsDF-1");
    CHECK(g.at("nodes").size() == 1);
    CHECK(g.at("edges").empty());
}

TEST_CASE("explain")
{
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_explain(sample_scenario_path("il1-to-il3"), 1, "", out, err) == cli::kOk);
    CHECK(out.str().find("target NS-IL: NS-IL#3") != std::string::npos);
    CHECK(out.str().find("candidates:") != std::string::npos);

    std::ostringstream quiet;
    CHECK(cli::cmd_explain(sample_scenario_path("quiet"), 5, "", quiet, err) == cli::kOk);
    CHECK(quiet.str().find("action: none") != std::string::npos);

    std::ostringstream beyond;
    CHECK(cli::cmd_explain(sample_scenario_path("quiet"), 100000, "", beyond, err) == cli::kValidation);
}
