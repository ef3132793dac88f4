#include "luandri/ingest.hpp"

#include "luandri/tokenize.hpp"

#include <fmt/core.h>

#include <charconv>
#include <optional>
#include <unordered_set>

namespace luandri {

namespace {

constexpr std::string_view kDocOpen = "<DOC>";
constexpr std::string_view kDocClose = "</DOC>";

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

struct Element {
    std::string_view content;
    std::size_t offset;  // of the opening tag, relative to the block
};

// First `<tag>...</tag>` inside `block`.
std::optional<Element> find_element(std::string_view block, std::string_view tag) {
    const std::string open = fmt::format("<{}>", tag);
    const std::string close = fmt::format("</{}>", tag);
    const auto begin = block.find(open);
    if (begin == std::string_view::npos) {
        return std::nullopt;
    }
    const auto content_begin = begin + open.size();
    const auto end = block.find(close, content_begin);
    if (end == std::string_view::npos) {
        return std::nullopt;
    }
    return Element{block.substr(content_begin, end - content_begin), begin};
}

std::optional<std::int64_t> parse_int64(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string> tokenize_at(std::string_view text, std::size_t base) {
    try {
        return tokenize(text);
    } catch (const IngestError& e) {
        throw IngestError(fmt::format("invalid UTF-8 at byte offset {}", base + e.offset()),
                          base + e.offset());
    }
}

}  // namespace

std::vector<RawDocument> parse_trec(std::string_view bytes,
                                    const std::set<std::string>& field_names,
                                    const WarningSink& warn) {
    std::vector<RawDocument> docs;
    std::unordered_set<std::string> seen;
    std::size_t pos = 0;
    while (true) {
        while (pos < bytes.size() && is_space(bytes[pos])) ++pos;
        if (pos >= bytes.size()) break;
        if (bytes.compare(pos, kDocOpen.size(), kDocOpen) != 0) {
            throw IngestError(fmt::format("expected <DOC> at byte offset {}", pos), pos);
        }
        const auto block_begin = pos + kDocOpen.size();
        const auto block_end = bytes.find(kDocClose, block_begin);
        if (block_end == std::string_view::npos) {
            throw IngestError(fmt::format("unterminated <DOC> block at byte offset {}", pos), pos);
        }
        const auto nested = bytes.find(kDocOpen, block_begin);
        if (nested < block_end) {
            throw IngestError(fmt::format("unterminated <DOC> block at byte offset {}", pos), pos);
        }
        const auto block = bytes.substr(block_begin, block_end - block_begin);

        const auto docno = find_element(block, "DOCNO");
        if (!docno) {
            throw IngestError(fmt::format("<DOC> block at byte offset {} has no <DOCNO>", pos), pos);
        }
        const auto name = trim(docno->content);
        if (name.empty()) {
            throw IngestError(fmt::format("empty <DOCNO> at byte offset {}", block_begin + docno->offset),
                              block_begin + docno->offset);
        }
        if (auto invalid = find_invalid_utf8(name); invalid != std::string_view::npos) {
            const auto at = static_cast<std::size_t>(name.data() - bytes.data()) + invalid;
            throw IngestError(fmt::format("invalid UTF-8 at byte offset {}", at), at);
        }
        const auto text = find_element(block, "TEXT");
        if (!text) {
            throw IngestError(fmt::format("document '{}' has no <TEXT>", name), pos);
        }
        if (!seen.emplace(name).second) {
            throw IngestError(fmt::format("duplicate DOCNO '{}'", name), pos);
        }

        RawDocument doc;
        doc.name = std::string(name);
        doc.tokens = tokenize_at(text->content,
                                 static_cast<std::size_t>(text->content.data() - bytes.data()));
        for (const auto& field : field_names) {
            const auto element = find_element(block, field);
            if (!element) continue;
            if (auto value = parse_int64(element->content)) {
                doc.fields.emplace(field, *value);
            } else if (warn) {
                warn(fmt::format("document '{}': field '{}' is not an integer, skipped", name, field));
            }
        }
        docs.push_back(std::move(doc));
        pos = block_end + kDocClose.size();
    }
    return docs;
}

RawDocument parse_plaintext(std::string_view name, std::string_view bytes) {
    RawDocument doc;
    doc.name = std::string(name);
    doc.tokens = tokenize(bytes);
    return doc;
}

}  // namespace luandri
