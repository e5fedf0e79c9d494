#include "doctest.h"

#include "nsscale/capacity.hpp"
#include "nsscale/rule.hpp"

using namespace nsscale;

TEST_CASE("capacity vector arithmetic")
{
    const CapacityVector a{2, 4, 20, 0};
    const CapacityVector b{8, 16, 40, 100};
    CHECK(a + b == CapacityVector{10, 20, 60, 100});
    CHECK(b - a == CapacityVector{6, 12, 20, 100});
    CHECK(-a == CapacityVector{-2, -4, -20, 0});
    CHECK(2.0 * a == CapacityVector{4, 8, 40, 0});
    CHECK((a - a).is_zero());
    CHECK_FALSE((a - b).is_nonnegative());
    CHECK(a.fits_within(b));
    CHECK(b.first_excess(a) == Dimension::vcpu);
    CHECK_FALSE(a.first_excess(b));
    CHECK(CapacityVector{1.0 + 1e-12, 0, 0, 0}.fits_within({1, 0, 0, 0}, kCapacityTolerance));
}

TEST_CASE("capacity vector json round trip")
{
    const CapacityVector c{1.5, 3, 10, 250};
    const nlohmann::json j = c;
    CHECK(j.get<CapacityVector>() == c);
}

TEST_CASE("resource kinds own disjoint dimensions")
{
    const CapacityVector c{1, 2, 3, 4};
    CHECK(restrict_to(c, ResourceKind::compute) == CapacityVector{1, 2, 0, 0});
    CHECK(restrict_to(c, ResourceKind::storage) == CapacityVector{0, 0, 3, 0});
    CHECK(restrict_to(c, ResourceKind::network) == CapacityVector{0, 0, 0, 4});
    for (Dimension d : kAllDimensions) {
        int owners = 0;
        for (ResourceKind k : kAllResourceKinds) {
            owners += dimension_in_kind(d, k) ? 1 : 0;
        }
        CHECK(owners == 1);
        CHECK(parse_dimension(to_string(d)) == d);
    }
}

TEST_CASE("parse a single comparison rule")
{
    const RuleAst ast = parse_rule("WHEN avg(vnfB.cpu_util, 3) > 0.8 THEN scale_out");
    CHECK(ast.direction == ScalingDirection::scale_out);
    CHECK_FALSE(ast.cooldown);
    const auto* cmp = std::get_if<Comparison>(&ast.condition->node);
    REQUIRE(cmp);
    CHECK(cmp->aggregate == Aggregate::avg);
    CHECK(cmp->metric == "vnfB.cpu_util");
    CHECK(cmp->window == 3);
    CHECK(cmp->comparator == Comparator::gt);
    CHECK(cmp->threshold == doctest::Approx(0.8));
}

TEST_CASE("parse negation, precedence and cooldown")
{
    const RuleAst neg = parse_rule("WHEN NOT (avg(x,1) > 0) THEN scale_in");
    CHECK(neg.direction == ScalingDirection::scale_in);
    CHECK(std::holds_alternative<NotExpr>(neg.condition->node));

    const RuleAst mixed = parse_rule("WHEN max(a,1) >= 1 OR min(b,2) < 2 AND avg(c,3) == 3 THEN scale_out COOLDOWN 4");
    REQUIRE(std::holds_alternative<OrExpr>(mixed.condition->node));
    const auto& orx = std::get<OrExpr>(mixed.condition->node);
    CHECK(std::holds_alternative<Comparison>(orx.lhs->node));
    CHECK(std::holds_alternative<AndExpr>(orx.rhs->node));
    CHECK(mixed.cooldown == 4);
    CHECK(mixed.metric_refs() == std::vector<std::string>{"a", "b", "c"});
    CHECK(mixed.comparisons().size() == 3);
}

TEST_CASE("render then parse is stable")
{
    for (const char* text : {"WHEN avg(vnfB.cpu_util, 3) > 0.8 THEN scale_out COOLDOWN 2",
                             "WHEN NOT (avg(x,1) > 0) THEN scale_in",
                             "WHEN (max(a,1) >= 1 OR min(b,2) < 2) AND avg(c,3) <= 3 THEN scale_in"}) {
        const std::string once = render_rule(parse_rule(text));
        CHECK(render_rule(parse_rule(once)) == once);
    }
}

TEST_CASE("rule syntax errors carry a column")
{
    CHECK_THROWS_AS(parse_rule("WHEN avg(x 1) > 0.8"), RuleSyntaxError);
    CHECK_THROWS_AS(parse_rule("WHEN median(x, 1) > 0.8 THEN scale_out"), RuleSyntaxError);
    CHECK_THROWS_AS(parse_rule("WHEN avg(x, 1) > THEN scale_out"), RuleSyntaxError);
    CHECK_THROWS_AS(parse_rule("WHEN avg(x, 1) > 1 THEN scale_up"), RuleSyntaxError);
    try {
        parse_rule("WHEN avg(x 1) > 0.8");
        FAIL("expected a syntax error");
    } catch (const RuleSyntaxError& e) {
        CHECK(e.column() == 12);
    }
}

TEST_CASE("condition evaluation")
{
    const RuleAst ast = parse_rule("WHEN avg(a,1) > 1 AND NOT max(b,1) < 0 THEN scale_out");
    auto values = [](double a, std::optional<double> b) {
        return [=](const Comparison& c) -> std::optional<double> { return c.metric == "a" ? a : b; };
    };
    CHECK(evaluate_condition(ast.condition, values(2, 1)) == true);
    CHECK(evaluate_condition(ast.condition, values(0.5, 1)) == false);
    CHECK(evaluate_condition(ast.condition, values(2, -1)) == false);
    CHECK_FALSE(evaluate_condition(ast.condition, values(2, std::nullopt)));
    CHECK(compare(1.0, Comparator::eq, 1.0));
    CHECK(compare(1.0, Comparator::le, 1.0));
    CHECK_FALSE(compare(1.0, Comparator::lt, 1.0));
}
