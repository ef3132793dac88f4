#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace luandri {

struct QueryNode;

struct TermNode {
    std::string term;
    friend bool operator==(const TermNode&, const TermNode&) = default;
};

/// Belief combination: mean of the children's log-probabilities.
struct CombineNode {
    std::vector<QueryNode> children;
    friend bool operator==(const CombineNode&, const CombineNode&) = default;
};

/// Occurrences of the children merged into one virtual term.
struct SynNode {
    std::vector<QueryNode> children;
    friend bool operator==(const SynNode&, const SynNode&) = default;
};

/// #odN: terms in order, each within `width` positions of the previous one.
struct OrderedWindowNode {
    std::uint32_t width = 1;
    std::vector<std::string> terms;
    friend bool operator==(const OrderedWindowNode&, const OrderedWindowNode&) = default;
};

/// #uwN: all terms inside a span of at most width * terms.size() positions.
struct UnorderedWindowNode {
    std::uint32_t width = 1;
    std::vector<std::string> terms;
    friend bool operator==(const UnorderedWindowNode&, const UnorderedWindowNode&) = default;
};

struct QueryNode {
    using Variant = std::variant<TermNode, CombineNode, SynNode, OrderedWindowNode, UnorderedWindowNode>;
    Variant value;

    QueryNode() = default;
    template <typename T>
        requires std::is_constructible_v<Variant, T&&> && (!std::is_same_v<std::remove_cvref_t<T>, QueryNode>)
    QueryNode(T&& node) : value(std::forward<T>(node)) {}

    template <typename T>
    bool is() const noexcept { return std::holds_alternative<T>(value); }
    template <typename T>
    const T& as() const { return std::get<T>(value); }

    friend bool operator==(const QueryNode&, const QueryNode&) = default;
};

enum class FilterOp { Greater, Less, Between, Equals };

/// Top-level restriction on an integer field. `high` is used only by Between,
/// which is inclusive on both ends.
struct NumericFilter {
    FilterOp op = FilterOp::Equals;
    std::string field;
    std::int64_t low = 0;
    std::int64_t high = 0;

    bool accepts(std::int64_t value) const noexcept;

    friend bool operator==(const NumericFilter&, const NumericFilter&) = default;
};

struct ParsedQuery {
    QueryNode belief;
    std::vector<NumericFilter> filters;

    friend bool operator==(const ParsedQuery&, const ParsedQuery&) = default;
};

/// Parses the structured query language (see docs/query-grammar.md).
/// Several top-level belief items are wrapped in one CombineNode. Throws
/// ParseError, and nothing else, on bad input.
ParsedQuery parse_query(std::string_view text);

/// Canonical text: `#combine( a b )`, `#od1( a b )`, `#greater( year 2009 )`.
std::string render_query(const QueryNode& belief, std::span<const NumericFilter> filters = {});
std::string render_query(const ParsedQuery& query);

/// Drops stop-word terms that are direct children of a Combine (or the whole
/// query, for a single bare term). Window and synonym operands are kept.
/// Returns nullopt when nothing is left to score.
std::optional<QueryNode> apply_stopwords(const QueryNode& belief, const std::set<std::string, std::less<>>& stopwords);

}  // namespace luandri
