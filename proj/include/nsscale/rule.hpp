#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nsscale {

using Tick = std::int64_t;

enum class ScalingDirection { scale_out, scale_in };

std::string_view to_string(ScalingDirection d);
std::optional<ScalingDirection> parse_scaling_direction(std::string_view text);

enum class Aggregate { avg, max, min };
enum class Comparator { lt, le, gt, ge, eq };

std::string_view to_string(Aggregate a);
std::string_view to_string(Comparator c);

struct RuleExpr;
using RuleExprPtr = std::shared_ptr<const RuleExpr>;

/// `agg(metric, window) cmp threshold`
struct Comparison {
    Aggregate aggregate = Aggregate::avg;
    std::string metric;
    int window = 1;
    Comparator comparator = Comparator::gt;
    double threshold = 0.0;
};

struct NotExpr {
    RuleExprPtr operand;
};

struct AndExpr {
    RuleExprPtr lhs;
    RuleExprPtr rhs;
};

struct OrExpr {
    RuleExprPtr lhs;
    RuleExprPtr rhs;
};

struct RuleExpr {
    std::variant<Comparison, NotExpr, AndExpr, OrExpr> node;
};

/// Parsed form of
///   rule := WHEN expr THEN (scale_out|scale_in) [COOLDOWN n]
///   expr := agg(metric, window) cmp number | expr AND expr | expr OR expr
///         | NOT expr | ( expr )
/// NOT binds tighter than AND, AND tighter than OR.
struct RuleAst {
    RuleExprPtr condition;
    ScalingDirection direction = ScalingDirection::scale_out;
    std::optional<Tick> cooldown;

    /// Every comparison in the condition, left to right.
    std::vector<const Comparison*> comparisons() const;

    /// Distinct metric references in first-appearance order.
    std::vector<std::string> metric_refs() const;
};

/// Throws RuleSyntaxError (1-based column) on malformed input, including an
/// unknown aggregate name.
RuleAst parse_rule(std::string_view text);

/// Canonical single-line rendering; parse_rule(render_rule(a)) == a.
std::string render_rule(const RuleAst& ast);

bool compare(double value, Comparator c, double threshold);

/// Evaluates the condition. `lookup` returns the aggregate value for a
/// comparison, or nullopt when no data exists; a missing value makes the
/// whole evaluation return nullopt.
std::optional<bool> evaluate_condition(const RuleExprPtr& expr,
                                       const std::function<std::optional<double>(const Comparison&)>& lookup);

} // namespace nsscale
