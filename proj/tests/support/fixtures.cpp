#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsscale/catalog_io.hpp"

namespace nsscale::testing {

std::string source_path(const std::string& relative)
{
    return std::string(NSSCALE_SOURCE_DIR) + "/" + relative;
}

std::string sample_catalog_dir()
{
    return source_path("data/sample/catalog");
}

std::string sample_scenario_path(const std::string& name)
{
    return source_path("data/sample/scenarios/" + name + ".json");
}

std::string test_data(const std::string& relative)
{
    return std::string(NSSCALE_TEST_DATA) + "/" + relative;
}

Catalog sample_catalog()
{
    return load_catalog(read_descriptor_files({sample_catalog_dir()}));
}

Scenario sample_scenario(const std::string& name)
{
    return load_scenario(sample_scenario_path(name));
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<BrokenCase> broken_cases()
{
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(test_data("broken"))) {
        if (entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<BrokenCase> cases;
    for (const auto& file : files) {
        const auto spec = nlohmann::json::parse(read_text(file.string()));
        const std::string target = spec.at("target").get<std::string>();
        BrokenCase c;
        c.name = file.stem().string();
        c.kind = spec.at("expect").at("kind").get<std::string>();
        c.path = spec.at("expect").at("path").get<std::string>();
        const std::string target_path = sample_catalog_dir() + "/" + target;
        for (const auto& name : {"nsd.json", "vnfd-1.json", "vnfd-2.json", "vnfd-3.json", "vlds.json", "vnffgd.json"}) {
            const std::string path = sample_catalog_dir() + "/" + name;
            auto body = nlohmann::json::parse(read_text(path));
            if (path == target_path) {
                body = body.patch(spec.at("patch"));
            }
            if (body.is_array()) {
                for (auto& doc : body) {
                    c.documents.push_back({path, std::move(doc)});
                }
            } else {
                c.documents.push_back({path, std::move(body)});
            }
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

} // namespace nsscale::testing
