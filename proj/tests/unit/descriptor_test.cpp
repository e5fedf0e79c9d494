#include "doctest.h"

#include "support/fixtures.hpp"
#include "nsscale/catalog_io.hpp"
#include "nsscale/deltas.hpp"
#include "nsscale/validation.hpp"

using namespace nsscale;
using namespace nsscale::testing;

namespace {

const NsDeploymentFlavor& sample_flavor(const Catalog& c)
{
    return *c.nsd("NSD-sample").find_flavor("NsDF-1");
}

const VnfDeploymentFlavor& vnfd2_flavor1(const Catalog& c)
{
    return *c.vnfd("VNFD#2").find_flavor("Flavor#1");
}

} // namespace

TEST_CASE("sample catalog loads")
{
    const Catalog c = sample_catalog();
    CHECK(c.nsds.size() == 1);
    CHECK(c.vnfds.size() == 3);
    CHECK(c.vlds.size() == 2);
    CHECK(c.vnffgds.size() == 1);
    const Nsd& nsd = c.nsd("NSD-sample");
    CHECK(nsd.auto_scaling_rules.size() == 4);
    CHECK(nsd.auto_scaling_rules[0].cooldown == 2);
    CHECK(nsd.auto_scaling_rules[3].direction_hint == ScalingDirection::scale_in);
    CHECK(nsd.find_monitored_item("ns.vl_util")->subject == kNsSelf);
    CHECK(sample_flavor(c).ns_ils.size() == 4);
    CHECK(sample_flavor(c).ns_il_index("NS-IL#3") == 2);
    CHECK(sample_flavor(c).ns_il_index("NS-IL#9") == -1);
}

TEST_CASE("empty document list gives an empty catalog")
{
    const Catalog c = load_catalog({});
    CHECK(c.nsds.empty());
    CHECK(c.vnfds.empty());
    CHECK(validate_catalog(c).empty());
}

TEST_CASE("duplicate VNFD ids are rejected")
{
    const nlohmann::json vnfd = {{"kind", "vnfd"}, {"id", "vnfd-B"}, {"vdus", nlohmann::json::array()},
                                 {"vcds", nlohmann::json::array()}, {"vsds", nlohmann::json::array()},
                                 {"flavors", nlohmann::json::array()}};
    CHECK_THROWS_AS(load_catalog({{"a.json", vnfd}, {"b.json", vnfd}}), DuplicateIdError);
}

TEST_CASE("syntax errors name their location")
{
    auto docs = read_descriptor_files({sample_catalog_dir()});
    for (auto& d : docs) {
        if (d.body.at("id") == "VNFD#2") {
            d.body["vcds"][0]["vcpu"] = "two";
        }
    }
    try {
        load_catalog(docs);
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.location().find("/vcds/0/vcpu") != std::string::npos);
    }
}

TEST_CASE("unknown fields and unreadable paths")
{
    CHECK_THROWS_AS(load_catalog({{"x.json", {{"kind", "vld"}, {"id", "v"}, {"flavors", nlohmann::json::array()},
                                              {"colour", "red"}}}}),
                    SyntaxError);
    CHECK_THROWS_AS(read_descriptor_files({"/nonexistent/path"}), IoError);
}

TEST_CASE("sample catalog validates clean")
{
    const ValidationReport report = validate_catalog(sample_catalog());
    for (const auto& e : report.entries) {
        INFO(e.kind << ' ' << e.path << ' ' << e.message);
    }
    CHECK(report.empty());
}

TEST_CASE("each broken descriptor yields exactly its entry")
{
    const auto cases = broken_cases();
    CHECK(cases.size() >= 15);
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const ValidationReport report = validate_catalog(load_catalog(c.documents));
        REQUIRE(report.entries.size() == 1);
        CHECK(report.entries[0].kind == c.kind);
        CHECK(report.entries[0].path == c.path);
    }
}

TEST_CASE("vdu requirement and VNF-IL capacity")
{
    const Catalog c = sample_catalog();
    const Vnfd& v = c.vnfd("VNFD#2");
    CHECK(vdu_requirement(v, *v.find_vdu("VDU#2")) == CapacityVector{8, 16, 40, 0});
    // IL#2 = 2 x (2,4,20) + (2,4,20)
    CHECK(vnf_il_capacity(v, vnfd2_flavor1(c), "VNF-IL#2") == CapacityVector{6, 12, 60, 0});
}

TEST_CASE("VNF-IL deltas")
{
    const Catalog c = sample_catalog();
    const Vnfd& v = c.vnfd("VNFD#2");
    const auto& f = vnfd2_flavor1(c);

    const IlDelta up = vnf_il_delta(v, f, "VNF-IL#1", "VNF-IL#3");
    CHECK(up.add == std::map<Id, int>{{"VDU#2", 1}});
    CHECK(up.remove == std::map<Id, int>{{"VDU#1", 1}});
    CHECK(up.net == CapacityVector{6, 12, 20, 0});

    const IlDelta add = vnf_il_delta(v, f, "VNF-IL#1", "VNF-IL#2");
    CHECK(add.add == std::map<Id, int>{{"VDU#1", 1}});
    CHECK(add.remove.empty());
    CHECK(add.net == CapacityVector{2, 4, 20, 0});

    for (const auto& il : f.ils) {
        CHECK(vnf_il_delta(v, f, il.id, il.id).empty());
    }
    CHECK_THROWS_AS(vnf_il_delta(v, f, "VNF-IL#1", "VNF-IL#9"), UnknownIdError);
}

TEST_CASE("VNF-IL delta oracle: net equals capacity difference")
{
    const Catalog c = sample_catalog();
    for (const auto& [id, v] : c.vnfds) {
        for (const auto& f : v.flavors) {
            for (const auto& a : f.ils) {
                for (const auto& b : f.ils) {
                    const IlDelta d = vnf_il_delta(v, f, a.id, b.id);
                    CHECK(d.net == vnf_il_capacity(v, f, b.id) - vnf_il_capacity(v, f, a.id));
                    for (const auto& [vdu, n] : d.add) {
                        CHECK(n > 0);
                        CHECK_FALSE(d.remove.count(vdu));
                    }
                }
            }
        }
    }
}

TEST_CASE("NS-IL deltas and classification")
{
    const Catalog c = sample_catalog();
    const auto& f = sample_flavor(c);

    const NsIlDelta d13 = ns_il_delta(c, f, "NS-IL#1", "NS-IL#3");
    CHECK(d13.classification == Procedure::vnf_scaling);
    REQUIRE(d13.profiles.size() == 1);
    CHECK(d13.profiles[0].profile == "vnf-B");
    CHECK(d13.profiles[0].change == ProfileChange::il_change);
    CHECK(d13.profiles[0].from.vnf_il_ref == "VNF-IL#1");
    CHECK(d13.profiles[0].to.vnf_il_ref == "VNF-IL#3");
    CHECK(d13.vls.size() == 2);

    CHECK(ns_il_delta(c, f, "NS-IL#3", "NS-IL#3").classification == Procedure::none);

    const NsIlDelta d34 = ns_il_delta(c, f, "NS-IL#3", "NS-IL#4");
    CHECK(d34.classification == Procedure::add_vnf);
    REQUIRE(d34.profiles.size() == 1);
    CHECK(d34.profiles[0].instances_added == 1);

    CHECK(ns_il_delta(c, f, "NS-IL#4", "NS-IL#3").classification == Procedure::remove_vnf);
    CHECK(ns_il_delta(c, f, "NS-IL#1", "NS-IL#4").classification == Procedure::mixed);
}

TEST_CASE("aggregate capacity oracle")
{
    const Catalog c = sample_catalog();
    const auto& f = sample_flavor(c);
    // A and C: (1,2,10) each; B at IL#1: (2,4,20) + (2,4,20); VLs 2 x 100.
    CHECK(aggregate_capacity(c, f, "NS-IL#1") == CapacityVector{6, 12, 60, 200});
    // B at IL#3: (8,16,40) + (2,4,20)
    CHECK(aggregate_capacity(c, f, "NS-IL#3") == CapacityVector{12, 24, 80, 800});
    CHECK(aggregate_capacity(c, f, "NS-IL#4") == CapacityVector{22, 44, 140, 1600});
    CHECK(total_instances(f, "NS-IL#4") == 4);

    for (const auto& a : f.ns_ils) {
        for (const auto& b : f.ns_ils) {
            CHECK(ns_il_delta(c, f, a.id, b.id).net == aggregate_capacity(c, f, b.id) - aggregate_capacity(c, f, a.id));
        }
    }
}

TEST_CASE("aggregate capacity of an empty level is zero")
{
    NsDeploymentFlavor f;
    f.id = "degenerate";
    f.ns_ils.push_back({"empty", {}, {}});
    CHECK(aggregate_capacity(Catalog{}, f, "empty").is_zero());
}
