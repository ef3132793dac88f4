#include "luandri/index.hpp"

#include "luandri/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

namespace luandri {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
    throw IndexError(IndexError::Kind::Corrupt, "inconsistent index: " + what);
}

}  // namespace

std::uint64_t PostingList::cf() const noexcept {
    return std::accumulate(entries.begin(), entries.end(), std::uint64_t{0},
                           [](std::uint64_t sum, const Posting& p) { return sum + p.tf(); });
}

IndexSnapshot::IndexSnapshot(Lexicon lexicon,
                             std::vector<DocumentRecord> documents,
                             NumericFieldTable fields,
                             std::vector<std::string> field_names,
                             std::string store)
    : lexicon_(std::move(lexicon)),
      documents_(std::move(documents)),
      fields_(std::move(fields)),
      field_names_(std::move(field_names)),
      store_(std::move(store)) {
    const auto doc_count = static_cast<std::uint64_t>(documents_.size());
    std::uint64_t total_terms = 0;
    std::unordered_set<std::string_view> names;
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        const auto& doc = documents_[i];
        if (doc.docid != i + 1) corrupt(fmt::format("document {} has docid {}", i + 1, doc.docid));
        if (!names.insert(doc.name).second) corrupt(fmt::format("duplicate name '{}'", doc.name));
        if (doc.text.offset > store_.size() || doc.text.length > store_.size() - doc.text.offset) {
            corrupt(fmt::format("text span of document {} exceeds the store", doc.docid));
        }
        total_terms += doc.doclen;
    }

    std::vector<std::uint64_t> seen_per_doc(documents_.size(), 0);
    std::uint64_t cf_sum = 0;
    for (const auto& [term, list] : lexicon_) {
        if (term.empty() || list.term != term || list.entries.empty()) {
            corrupt(fmt::format("bad posting list for '{}'", term));
        }
        DocId prev = 0;
        for (const auto& entry : list.entries) {
            if (entry.docid <= prev || entry.docid > doc_count || entry.positions.empty()) {
                corrupt(fmt::format("bad entry for '{}' in document {}", term, entry.docid));
            }
            prev = entry.docid;
            const auto doclen = documents_[entry.docid - 1].doclen;
            for (std::size_t k = 0; k < entry.positions.size(); ++k) {
                if ((k > 0 && entry.positions[k] <= entry.positions[k - 1]) ||
                    entry.positions[k] >= doclen) {
                    corrupt(fmt::format("bad positions for '{}' in document {}", term, entry.docid));
                }
            }
            seen_per_doc[entry.docid - 1] += entry.tf();
        }
        cf_sum += list.cf();
    }
    if (cf_sum != total_terms) corrupt("sum of collection frequencies differs from total terms");
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        if (seen_per_doc[i] != documents_[i].doclen) {
            corrupt(fmt::format("document {} length disagrees with its postings", i + 1));
        }
    }

    const std::set<std::string_view> declared(field_names_.begin(), field_names_.end());
    if (declared.size() != field_names_.size() ||
        !std::is_sorted(field_names_.begin(), field_names_.end())) {
        corrupt("field names must be sorted and unique");
    }
    for (const auto& [field, values] : fields_) {
        if (!declared.contains(field)) corrupt(fmt::format("undeclared field '{}'", field));
        for (const auto& [docid, value] : values) {
            if (docid == 0 || docid > doc_count) {
                corrupt(fmt::format("field '{}' refers to unknown document {}", field, docid));
            }
        }
    }

    stats_ = CollectionStats{doc_count, total_terms, static_cast<std::uint64_t>(lexicon_.size())};
}

const PostingList* IndexSnapshot::postings(std::string_view term) const {
    const auto it = lexicon_.find(term);
    return it == lexicon_.end() ? nullptr : &it->second;
}

const DocumentRecord* IndexSnapshot::document(DocId docid) const {
    if (docid == 0 || docid > documents_.size()) return nullptr;
    return &documents_[docid - 1];
}

std::optional<std::int64_t> IndexSnapshot::field_value(std::string_view field, DocId docid) const {
    const auto table = fields_.find(field);
    if (table == fields_.end()) return std::nullopt;
    const auto it = table->second.find(docid);
    if (it == table->second.end()) return std::nullopt;
    return it->second;
}

std::string_view IndexSnapshot::stored_text(DocId docid) const {
    const auto* doc = document(docid);
    if (doc == nullptr) return {};
    return std::string_view(store_).substr(doc->text.offset, doc->text.length);
}

std::vector<std::string_view> IndexSnapshot::document_tokens(DocId docid) const {
    std::vector<std::string_view> tokens;
    auto text = stored_text(docid);
    while (!text.empty()) {
        const auto space = text.find(' ');
        tokens.push_back(text.substr(0, space));
        if (space == std::string_view::npos) break;
        text.remove_prefix(space + 1);
    }
    return tokens;
}

IndexSnapshot build_index(std::span<const RawDocument> docs,
                          std::span<const std::string> declared_fields) {
    Lexicon lexicon;
    std::vector<DocumentRecord> records;
    NumericFieldTable fields;
    std::set<std::string> field_names(declared_fields.begin(), declared_fields.end());
    std::string store;
    std::unordered_set<std::string_view> names;

    records.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& doc = docs[i];
        const DocId docid = i + 1;
        if (!names.insert(doc.name).second) {
            throw IndexError(IndexError::Kind::DuplicateName,
                             fmt::format("duplicate document name '{}'", doc.name));
        }

        const auto offset = store.size();
        for (std::size_t p = 0; p < doc.tokens.size(); ++p) {
            const auto& term = doc.tokens[p];
            if (term.empty() || term.find_first_of(" \t\n\r\f\v") != std::string::npos) {
                throw IndexError(IndexError::Kind::Corrupt,
                                 fmt::format("document '{}' has an invalid token at position {}", doc.name, p));
            }
            if (p > 0) store.push_back(' ');
            store += term;
            auto [it, inserted] = lexicon.try_emplace(term);
            auto& list = it->second;
            if (inserted) list.term = term;
            if (list.entries.empty() || list.entries.back().docid != docid) {
                list.entries.push_back(Posting{docid, {}});
            }
            list.entries.back().positions.push_back(static_cast<Position>(p));
        }
        records.push_back(DocumentRecord{docid, doc.name, doc.tokens.size(),
                                         TextSpan{offset, store.size() - offset}});

        for (const auto& [field, value] : doc.fields) {
            field_names.insert(field);
            fields[field].emplace(docid, value);
        }
    }

    return IndexSnapshot(std::move(lexicon), std::move(records), std::move(fields),
                         std::vector<std::string>(field_names.begin(), field_names.end()),
                         std::move(store));
}

}  // namespace luandri
