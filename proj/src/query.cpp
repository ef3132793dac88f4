#include "luandri/query.hpp"

#include "luandri/error.hpp"
#include "luandri/tokenize.hpp"

#include <fmt/core.h>

#include <charconv>
#include <limits>

namespace luandri {

ParseError::ParseError(std::size_t offset, std::string expected, std::string found)
    : Error(fmt::format("parse error at offset {}: expected {}, found {}", offset, expected, found)),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

bool NumericFilter::accepts(std::int64_t value) const noexcept {
    switch (op) {
        case FilterOp::Greater: return value > low;
        case FilterOp::Less: return value < low;
        case FilterOp::Between: return low <= value && value <= high;
        case FilterOp::Equals: return value == low;
    }
    return false;
}

namespace {

enum class TokenKind { Open, Close, Operator, Word, End };

struct Token {
    TokenKind kind;
    std::string_view text;
    std::size_t offset;
};

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_char(char c) {
    return !is_space(c) && c != '(' && c != ')' && c != '#';
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (is_space(c)) {
            ++i;
        } else if (c == '(' || c == ')') {
            tokens.push_back({c == '(' ? TokenKind::Open : TokenKind::Close, text.substr(i, 1), i});
            ++i;
        } else {
            const auto start = i;
            if (c == '#') ++i;
            while (i < text.size() && is_word_char(text[i])) ++i;
            tokens.push_back({c == '#' ? TokenKind::Operator : TokenKind::Word, text.substr(start, i - start), start});
        }
    }
    tokens.push_back({TokenKind::End, {}, text.size()});
    return tokens;
}

std::string describe(const Token& token) {
    if (token.kind == TokenKind::End) return "end of query";
    return fmt::format("'{}'", token.text);
}

enum class OpKind { Combine, Syn, Ordered, Unordered, Greater, Less, Between, Equals };

struct Operator {
    OpKind kind;
    std::uint32_t width = 0;
    bool is_filter() const { return kind >= OpKind::Greater; }
};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    ParsedQuery parse() {
        if (peek().kind == TokenKind::End) {
            throw ParseError(peek().offset, "a query term or operator", "end of query");
        }
        std::vector<QueryNode> beliefs;
        std::vector<NumericFilter> filters;
        while (peek().kind != TokenKind::End) {
            if (peek().kind == TokenKind::Close) {
                throw ParseError(peek().offset, "a query term or operator", "unbalanced ')'");
            }
            if (peek().kind == TokenKind::Operator && operator_at(peek()).is_filter()) {
                filters.push_back(parse_filter());
            } else {
                parse_belief(beliefs);
            }
        }
        if (beliefs.empty()) {
            throw ParseError(peek().offset, "a query term", "no scoring terms in query");
        }
        ParsedQuery query;
        query.belief = beliefs.size() == 1 ? std::move(beliefs.front()) : QueryNode(CombineNode{std::move(beliefs)});
        query.filters = std::move(filters);
        return query;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    void expect_open() {
        if (peek().kind != TokenKind::Open) throw ParseError(peek().offset, "'('", describe(peek()));
        ++pos_;
    }

    Operator operator_at(const Token& token) const {
        std::string name;
        std::size_t i = 1;
        for (; i < token.text.size(); ++i) {
            const char c = token.text[i];
            if (c >= 'A' && c <= 'Z') {
                name.push_back(static_cast<char>(c - 'A' + 'a'));
            } else if (c >= 'a' && c <= 'z') {
                name.push_back(c);
            } else {
                break;
            }
        }
        const auto suffix = token.text.substr(i);
        if (name.empty()) {
            throw ParseError(token.offset, "an operator name", describe(token));
        }
        auto unknown = [&] { return ParseError(token.offset, "a known operator", describe(token)); };
        if (name == "od" || name == "uw") {
            if (suffix.empty()) {
                throw ParseError(token.offset, "a window size after '#" + name + "'", describe(token));
            }
            std::uint64_t width = 0;
            const auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), width);
            if (ec != std::errc{} || ptr != suffix.data() + suffix.size() ||
                width > std::numeric_limits<std::uint32_t>::max()) {
                throw unknown();
            }
            if (width < 1) {
                throw ParseError(token.offset, "a window size of at least 1", describe(token));
            }
            return {name == "od" ? OpKind::Ordered : OpKind::Unordered, static_cast<std::uint32_t>(width)};
        }
        if (!suffix.empty()) throw unknown();
        if (name == "combine") return {OpKind::Combine};
        if (name == "syn") return {OpKind::Syn};
        if (name == "greater") return {OpKind::Greater};
        if (name == "less") return {OpKind::Less};
        if (name == "between") return {OpKind::Between};
        if (name == "equals") return {OpKind::Equals};
        throw unknown();
    }

    static void push_terms(std::vector<QueryNode>& out, std::string_view word) {
        for (auto& term : tokenize(word)) out.push_back(TermNode{std::move(term)});
    }

    // belief := TERM | #combine(belief+) | #syn(prox+) | #odN(TERM TERM+) | #uwN(TERM TERM+)
    void parse_belief(std::vector<QueryNode>& out) {
        const Token& token = take();
        switch (token.kind) {
            case TokenKind::Word: push_terms(out, token.text); return;
            case TokenKind::Operator: break;
            default: throw ParseError(token.offset, "a query term or operator", describe(token));
        }
        const auto op = operator_at(token);
        switch (op.kind) {
            case OpKind::Combine: {
                expect_open();
                CombineNode node;
                while (!at_close("a query term or operator")) parse_belief(node.children);
                require_children(node.children.size(), 1, "#combine");
                out.push_back(std::move(node));
                return;
            }
            case OpKind::Syn: out.push_back(parse_syn()); return;
            case OpKind::Ordered:
            case OpKind::Unordered: out.push_back(parse_window(op)); return;
            default:
                throw ParseError(token.offset, "a scoring operator", "filter " + describe(token) + " nested inside an operator");
        }
    }

    // prox := TERM | #syn(prox+) | #odN(...) | #uwN(...)
    void parse_prox(std::vector<QueryNode>& out) {
        const Token& token = take();
        if (token.kind == TokenKind::Word) {
            push_terms(out, token.text);
            return;
        }
        if (token.kind != TokenKind::Operator) {
            throw ParseError(token.offset, "a term or proximity operator", describe(token));
        }
        const auto op = operator_at(token);
        switch (op.kind) {
            case OpKind::Syn: out.push_back(parse_syn()); return;
            case OpKind::Ordered:
            case OpKind::Unordered: out.push_back(parse_window(op)); return;
            case OpKind::Combine:
                throw ParseError(token.offset, "a term or proximity operator", describe(token));
            default:
                throw ParseError(token.offset, "a term or proximity operator",
                                 "filter " + describe(token) + " nested inside an operator");
        }
    }

    QueryNode parse_syn() {
        expect_open();
        SynNode node;
        while (!at_close("a term or proximity operator")) parse_prox(node.children);
        require_children(node.children.size(), 1, "#syn");
        return node;
    }

    QueryNode parse_window(const Operator& op) {
        expect_open();
        std::vector<std::string> terms;
        while (!at_close("a term")) {
            const Token& token = take();
            if (token.kind != TokenKind::Word) {
                throw ParseError(token.offset, "a term", describe(token));
            }
            for (auto& term : tokenize(token.text)) terms.push_back(std::move(term));
        }
        require_children(terms.size(), 2, op.kind == OpKind::Ordered ? "#od" : "#uw");
        if (op.kind == OpKind::Ordered) return OrderedWindowNode{op.width, std::move(terms)};
        return UnorderedWindowNode{op.width, std::move(terms)};
    }

    NumericFilter parse_filter() {
        const Token& token = take();
        const auto op = operator_at(token);
        expect_open();
        NumericFilter filter;
        const Token& field = take();
        if (field.kind != TokenKind::Word) throw ParseError(field.offset, "a field name", describe(field));
        filter.field = std::string(field.text);
        filter.low = parse_int();
        switch (op.kind) {
            case OpKind::Greater: filter.op = FilterOp::Greater; break;
            case OpKind::Less: filter.op = FilterOp::Less; break;
            case OpKind::Equals: filter.op = FilterOp::Equals; break;
            default: {
                filter.op = FilterOp::Between;
                const auto offset = peek().offset;
                filter.high = parse_int();
                if (filter.high < filter.low) {
                    throw ParseError(offset, fmt::format("an upper bound of at least {}", filter.low),
                                     std::to_string(filter.high));
                }
            }
        }
        if (peek().kind != TokenKind::Close) throw ParseError(peek().offset, "')'", describe(peek()));
        ++pos_;
        return filter;
    }

    std::int64_t parse_int() {
        const Token& token = take();
        if (token.kind == TokenKind::Word) {
            auto text = token.text;
            if (text.size() > 1 && text.front() == '+') text.remove_prefix(1);
            std::int64_t value = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec == std::errc{} && ptr == text.data() + text.size()) return value;
        }
        throw ParseError(token.offset, "an integer", describe(token));
    }

    // Consumes ')' and returns true, or returns false when more operands follow.
    bool at_close(const char* expected) {
        if (peek().kind == TokenKind::Close) {
            close_offset_ = peek().offset;
            ++pos_;
            return true;
        }
        if (peek().kind == TokenKind::End) {
            throw ParseError(peek().offset, std::string(expected) + " or ')'", "end of query");
        }
        return false;
    }

    void require_children(std::size_t have, std::size_t need, const char* name) const {
        if (have < need) {
            throw ParseError(close_offset_, fmt::format("at least {} operand(s) for {}", need, name), "')'");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t close_offset_ = 0;
};

void render(std::string& out, const QueryNode& node) {
    auto group = [&](std::string_view head, const auto& children, auto&& each) {
        out += head;
        out += "( ";
        for (const auto& child : children) {
            each(child);
            out += ' ';
        }
        out += ')';
    };
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TermNode>) {
                out += n.term;
            } else if constexpr (std::is_same_v<T, CombineNode>) {
                group("#combine", n.children, [&](const QueryNode& c) { render(out, c); });
            } else if constexpr (std::is_same_v<T, SynNode>) {
                group("#syn", n.children, [&](const QueryNode& c) { render(out, c); });
            } else if constexpr (std::is_same_v<T, OrderedWindowNode>) {
                group(fmt::format("#od{}", n.width), n.terms, [&](const std::string& t) { out += t; });
            } else {
                group(fmt::format("#uw{}", n.width), n.terms, [&](const std::string& t) { out += t; });
            }
        },
        node.value);
}

std::string_view filter_name(FilterOp op) {
    switch (op) {
        case FilterOp::Greater: return "#greater";
        case FilterOp::Less: return "#less";
        case FilterOp::Between: return "#between";
        case FilterOp::Equals: return "#equals";
    }
    return {};
}

std::optional<QueryNode> strip(const QueryNode& node, const std::set<std::string, std::less<>>& stopwords) {
    if (const auto* term = std::get_if<TermNode>(&node.value)) {
        if (stopwords.contains(term->term)) return std::nullopt;
        return node;
    }
    if (const auto* combine = std::get_if<CombineNode>(&node.value)) {
        CombineNode kept;
        for (const auto& child : combine->children) {
            if (auto survivor = strip(child, stopwords)) kept.children.push_back(std::move(*survivor));
        }
        if (kept.children.empty()) return std::nullopt;
        return QueryNode(std::move(kept));
    }
    return node;
}

}  // namespace

ParsedQuery parse_query(std::string_view text) {
    if (const auto bad = find_invalid_utf8(text); bad != std::string_view::npos) {
        throw ParseError(bad, "valid UTF-8", "malformed byte sequence");
    }
    return Parser(text).parse();
}

std::string render_query(const QueryNode& belief, std::span<const NumericFilter> filters) {
    std::string out;
    render(out, belief);
    for (const auto& f : filters) {
        if (f.op == FilterOp::Between) {
            out += fmt::format(" {}( {} {} {} )", filter_name(f.op), f.field, f.low, f.high);
        } else {
            out += fmt::format(" {}( {} {} )", filter_name(f.op), f.field, f.low);
        }
    }
    return out;
}

std::string render_query(const ParsedQuery& query) {
    return render_query(query.belief, query.filters);
}

std::optional<QueryNode> apply_stopwords(const QueryNode& belief, const std::set<std::string, std::less<>>& stopwords) {
    return strip(belief, stopwords);
}

}  // namespace luandri
