#include "nsscale/rule.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "nsscale/errors.hpp"

namespace nsscale {

std::string_view to_string(ScalingDirection d)
{
    return d == ScalingDirection::scale_out ? "scale_out" : "scale_in";
}

std::optional<ScalingDirection> parse_scaling_direction(std::string_view text)
{
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::replace(lowered.begin(), lowered.end(), '-', '_');
    if (lowered == "scale_out") {
        return ScalingDirection::scale_out;
    }
    if (lowered == "scale_in") {
        return ScalingDirection::scale_in;
    }
    return std::nullopt;
}

std::string_view to_string(Aggregate a)
{
    switch (a) {
    case Aggregate::avg: return "avg";
    case Aggregate::max: return "max";
    case Aggregate::min: return "min";
    }
    return "?";
}

std::string_view to_string(Comparator c)
{
    switch (c) {
    case Comparator::lt: return "<";
    case Comparator::le: return "<=";
    case Comparator::gt: return ">";
    case Comparator::ge: return ">=";
    case Comparator::eq: return "=";
    }
    return "?";
}

namespace {

enum class TokenType { identifier, number, lparen, rparen, comma, comparator, end };

struct Token {
    TokenType type = TokenType::end;
    std::string text;
    std::size_t column = 1;
    Comparator comparator = Comparator::eq;
};

bool is_ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> tokens;
        while (true) {
            skip_space();
            Token t;
            t.column = pos_ + 1;
            if (pos_ >= text_.size()) {
                tokens.push_back(t);
                return tokens;
            }
            const char c = text_[pos_];
            if (c == '(') {
                t.type = TokenType::lparen;
                t.text = "(";
                ++pos_;
            } else if (c == ')') {
                t.type = TokenType::rparen;
                t.text = ")";
                ++pos_;
            } else if (c == ',') {
                t.type = TokenType::comma;
                t.text = ",";
                ++pos_;
            } else if (c == '<' || c == '>' || c == '=') {
                t.type = TokenType::comparator;
                const bool or_equal = pos_ + 1 < text_.size() && text_[pos_ + 1] == '=';
                if (c == '<') {
                    t.comparator = or_equal ? Comparator::le : Comparator::lt;
                } else if (c == '>') {
                    t.comparator = or_equal ? Comparator::ge : Comparator::gt;
                } else {
                    t.comparator = Comparator::eq;
                }
                const std::size_t len = or_equal ? 2 : 1;
                t.text = std::string(text_.substr(pos_, len));
                pos_ += len;
            } else if (text_.substr(pos_, 3) == "\xE2\x89\xA4" || text_.substr(pos_, 3) == "\xE2\x89\xA5") {
                t.type = TokenType::comparator;
                t.comparator = text_[pos_ + 2] == '\xA4' ? Comparator::le : Comparator::ge;
                t.text = std::string(text_.substr(pos_, 3));
                pos_ += 3;
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
                t.type = TokenType::number;
                t.text = scan_number();
            } else if (is_ident_start(c)) {
                t.type = TokenType::identifier;
                const std::size_t start = pos_;
                while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
                    ++pos_;
                }
                t.text = std::string(text_.substr(start, pos_ - start));
            } else {
                throw RuleSyntaxError(pos_ + 1, std::string("unexpected character '") + c + "'");
            }
            tokens.push_back(std::move(t));
        }
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    std::string scan_number()
    {
        const std::size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+') {
            ++pos_;
        }
        bool digits = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            digits = true;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                digits = true;
            }
        }
        if (!digits) {
            throw RuleSyntaxError(start + 1, "malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '-' || text_[p] == '+')) {
                ++p;
            }
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
            }
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string describe(const Token& t)
{
    return t.type == TokenType::end ? std::string("end of input") : "'" + t.text + "'";
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    RuleAst parse()
    {
        RuleAst ast;
        expect_keyword("when");
        ast.condition = parse_or();
        expect_keyword("then");
        const Token& dir = next();
        auto direction = dir.type == TokenType::identifier ? parse_scaling_direction(dir.text) : std::nullopt;
        if (!direction || dir.text.find('-') != std::string::npos) {
            throw RuleSyntaxError(dir.column, "expected scale_out or scale_in, got " + describe(dir));
        }
        ast.direction = *direction;
        if (is_keyword(peek(), "cooldown")) {
            next();
            const Token& n = next();
            long long value = 0;
            if (n.type != TokenType::number || !parse_integer(n.text, value) || value < 0) {
                throw RuleSyntaxError(n.column, "expected non-negative integer cooldown, got " + describe(n));
            }
            ast.cooldown = value;
        }
        if (peek().type != TokenType::end) {
            throw RuleSyntaxError(peek().column, "unexpected " + describe(peek()) + " after rule");
        }
        return ast;
    }

private:
    static bool is_keyword(const Token& t, std::string_view kw)
    {
        return t.type == TokenType::identifier && lower(t.text) == kw;
    }

    static bool parse_integer(const std::string& text, long long& out)
    {
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        return ec == std::errc{} && ptr == text.data() + text.size();
    }

    const Token& peek() const { return tokens_[index_]; }

    const Token& next()
    {
        const Token& t = tokens_[index_];
        if (index_ + 1 < tokens_.size()) {
            ++index_;
        }
        return t;
    }

    void expect_keyword(std::string_view kw)
    {
        const Token& t = next();
        if (!is_keyword(t, kw)) {
            std::string upper(kw);
            std::transform(upper.begin(), upper.end(), upper.begin(),
                           [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
            throw RuleSyntaxError(t.column, "expected " + upper + ", got " + describe(t));
        }
    }

    const Token& expect(TokenType type, std::string_view what)
    {
        const Token& t = next();
        if (t.type != type) {
            throw RuleSyntaxError(t.column, "expected " + std::string(what) + ", got " + describe(t));
        }
        return t;
    }

    RuleExprPtr parse_or()
    {
        RuleExprPtr lhs = parse_and();
        while (is_keyword(peek(), "or")) {
            next();
            RuleExprPtr rhs = parse_and();
            lhs = std::make_shared<const RuleExpr>(RuleExpr{OrExpr{lhs, rhs}});
        }
        return lhs;
    }

    RuleExprPtr parse_and()
    {
        RuleExprPtr lhs = parse_unary();
        while (is_keyword(peek(), "and")) {
            next();
            RuleExprPtr rhs = parse_unary();
            lhs = std::make_shared<const RuleExpr>(RuleExpr{AndExpr{lhs, rhs}});
        }
        return lhs;
    }

    RuleExprPtr parse_unary()
    {
        if (is_keyword(peek(), "not")) {
            next();
            return std::make_shared<const RuleExpr>(RuleExpr{NotExpr{parse_unary()}});
        }
        if (peek().type == TokenType::lparen) {
            next();
            RuleExprPtr inner = parse_or();
            expect(TokenType::rparen, "')'");
            return inner;
        }
        return parse_comparison();
    }

    RuleExprPtr parse_comparison()
    {
        const Token& name = next();
        if (name.type != TokenType::identifier) {
            throw RuleSyntaxError(name.column, "expected aggregate, got " + describe(name));
        }
        Comparison c;
        const std::string agg = lower(name.text);
        if (agg == "avg") {
            c.aggregate = Aggregate::avg;
        } else if (agg == "max") {
            c.aggregate = Aggregate::max;
        } else if (agg == "min") {
            c.aggregate = Aggregate::min;
        } else {
            throw RuleSyntaxError(name.column, "unknown aggregate '" + name.text + "'");
        }
        expect(TokenType::lparen, "'('");
        c.metric = expect(TokenType::identifier, "metric name").text;
        expect(TokenType::comma, "','");
        const Token& window = expect(TokenType::number, "window length");
        long long w = 0;
        if (!parse_integer(window.text, w) || w < 1 || w > 1'000'000'000) {
            throw RuleSyntaxError(window.column, "window length must be a positive integer");
        }
        c.window = static_cast<int>(w);
        expect(TokenType::rparen, "')'");
        const Token& cmp = expect(TokenType::comparator, "comparator");
        c.comparator = cmp.comparator;
        const Token& number = expect(TokenType::number, "number");
        auto [ptr, ec] = std::from_chars(number.text.data() + (number.text[0] == '+' ? 1 : 0),
                                         number.text.data() + number.text.size(), c.threshold);
        if (ec != std::errc{} || ptr != number.text.data() + number.text.size() || !std::isfinite(c.threshold)) {
            throw RuleSyntaxError(number.column, "malformed number '" + number.text + "'");
        }
        return std::make_shared<const RuleExpr>(RuleExpr{c});
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

void collect(const RuleExprPtr& e, std::vector<const Comparison*>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                out.push_back(&n);
            } else if constexpr (std::is_same_v<T, NotExpr>) {
                collect(n.operand, out);
            } else {
                collect(n.lhs, out);
                collect(n.rhs, out);
            }
        },
        e->node);
}

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
}

std::string render(const RuleExprPtr& e)
{
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                return std::string(to_string(n.aggregate)) + "(" + n.metric + ", " + std::to_string(n.window) +
                       ") " + std::string(to_string(n.comparator)) + " " + format_number(n.threshold);
            } else if constexpr (std::is_same_v<T, NotExpr>) {
                return "NOT " + render(n.operand);
            } else if constexpr (std::is_same_v<T, AndExpr>) {
                return "(" + render(n.lhs) + " AND " + render(n.rhs) + ")";
            } else {
                return "(" + render(n.lhs) + " OR " + render(n.rhs) + ")";
            }
        },
        e->node);
}

} // namespace

std::vector<const Comparison*> RuleAst::comparisons() const
{
    std::vector<const Comparison*> out;
    if (condition) {
        collect(condition, out);
    }
    return out;
}

std::vector<std::string> RuleAst::metric_refs() const
{
    std::vector<std::string> refs;
    for (const Comparison* c : comparisons()) {
        if (std::find(refs.begin(), refs.end(), c->metric) == refs.end()) {
            refs.push_back(c->metric);
        }
    }
    return refs;
}

RuleAst parse_rule(std::string_view text)
{
    return Parser(Lexer(text).run()).parse();
}

std::string render_rule(const RuleAst& ast)
{
    std::string out = "WHEN " + render(ast.condition) + " THEN " + std::string(to_string(ast.direction));
    if (ast.cooldown) {
        out += " COOLDOWN " + std::to_string(*ast.cooldown);
    }
    return out;
}

bool compare(double value, Comparator c, double threshold)
{
    switch (c) {
    case Comparator::lt: return value < threshold;
    case Comparator::le: return value <= threshold;
    case Comparator::gt: return value > threshold;
    case Comparator::ge: return value >= threshold;
    case Comparator::eq: return value == threshold;
    }
    return false;
}

std::optional<bool> evaluate_condition(const RuleExprPtr& expr,
                                       const std::function<std::optional<double>(const Comparison&)>& lookup)
{
    return std::visit(
        [&](const auto& n) -> std::optional<bool> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                auto v = lookup(n);
                if (!v) {
                    return std::nullopt;
                }
                return compare(*v, n.comparator, n.threshold);
            } else if constexpr (std::is_same_v<T, NotExpr>) {
                auto v = evaluate_condition(n.operand, lookup);
                if (!v) {
                    return std::nullopt;
                }
                return !*v;
            } else {
                // Both sides are always evaluated so missing data anywhere is reported.
                auto l = evaluate_condition(n.lhs, lookup);
                auto r = evaluate_condition(n.rhs, lookup);
                if (!l || !r) {
                    return std::nullopt;
                }
                if constexpr (std::is_same_v<T, AndExpr>) {
                    return *l && *r;
                } else {
                    return *l || *r;
                }
            }
        },
        expr->node);
}

} // namespace nsscale
