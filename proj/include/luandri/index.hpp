#pragma once

#include "luandri/ingest.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace luandri {

using DocId = std::uint64_t;
using Position = std::uint32_t;

struct Posting {
    DocId docid = 0;
    std::vector<Position> positions;  // strictly increasing; size() is tf

    std::uint64_t tf() const noexcept { return positions.size(); }

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct PostingList {
    std::string term;
    std::vector<Posting> entries;  // docids strictly increasing

    std::uint64_t df() const noexcept { return entries.size(); }
    std::uint64_t cf() const noexcept;

    friend bool operator==(const PostingList&, const PostingList&) = default;
};

struct TextSpan {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;

    friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

struct DocumentRecord {
    DocId docid = 0;
    std::string name;
    std::uint64_t doclen = 0;
    TextSpan text;

    friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

struct CollectionStats {
    std::uint64_t doc_count = 0;
    std::uint64_t total_terms = 0;
    std::uint64_t vocab_size = 0;

    friend bool operator==(const CollectionStats&, const CollectionStats&) = default;
};

using Lexicon = std::map<std::string, PostingList, std::less<>>;
using FieldValues = std::map<DocId, std::int64_t>;
using NumericFieldTable = std::map<std::string, FieldValues, std::less<>>;

/// Immutable searchable state. Documents carry docids 1..doc_count in order.
class IndexSnapshot {
public:
    IndexSnapshot() = default;

    /// Assembles a snapshot from its parts and checks every cross-table
    /// invariant; throws IndexError(Corrupt) when one does not hold.
    IndexSnapshot(Lexicon lexicon,
                  std::vector<DocumentRecord> documents,
                  NumericFieldTable fields,
                  std::vector<std::string> field_names,
                  std::string store);

    const CollectionStats& stats() const noexcept { return stats_; }
    const Lexicon& lexicon() const noexcept { return lexicon_; }
    std::span<const DocumentRecord> documents() const noexcept { return documents_; }
    const NumericFieldTable& fields() const noexcept { return fields_; }
    const std::vector<std::string>& field_names() const noexcept { return field_names_; }
    const std::string& store() const noexcept { return store_; }

    /// nullptr when the term is out of vocabulary.
    const PostingList* postings(std::string_view term) const;
    /// nullptr when docid is not in 1..doc_count.
    const DocumentRecord* document(DocId docid) const;
    std::optional<std::int64_t> field_value(std::string_view field, DocId docid) const;

    std::string_view stored_text(DocId docid) const;
    std::vector<std::string_view> document_tokens(DocId docid) const;

    friend bool operator==(const IndexSnapshot&, const IndexSnapshot&) = default;

private:
    Lexicon lexicon_;
    std::vector<DocumentRecord> documents_;
    NumericFieldTable fields_;
    std::vector<std::string> field_names_;
    std::string store_;
    CollectionStats stats_;
};

/// Assigns docids 1,2,... in input order. `declared_fields` are recorded in the
/// field-name list even if no document carries them. Throws
/// IndexError(DuplicateName) on repeated document names.
IndexSnapshot build_index(std::span<const RawDocument> docs,
                          std::span<const std::string> declared_fields = {});

}  // namespace luandri
