#pragma once

#include "luandri/index.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace luandri {

/// One or more opened indexes searched as a single collection. Documents of
/// the n-th index are numbered after all documents of the indexes before it.
class QueryEnvironment {
public:
    struct Shard {
        std::shared_ptr<const IndexSnapshot> snapshot;
        DocId offset = 0;
    };

    QueryEnvironment() = default;

    void add_index(std::shared_ptr<const IndexSnapshot> snapshot);
    /// Opens an index directory; throws IndexError.
    void add_index(const std::filesystem::path& directory);

    std::span<const Shard> shards() const noexcept { return shards_; }
    bool empty() const noexcept { return shards_.empty(); }
    std::uint64_t doc_count() const noexcept { return doc_count_; }
    std::uint64_t total_terms() const noexcept { return total_terms_; }

    /// Shard holding `docid` and the docid local to it; nullopt if unknown.
    std::optional<std::pair<const Shard*, DocId>> locate(DocId docid) const;

    std::optional<std::int64_t> field_value(std::string_view field, DocId docid) const;

private:
    std::vector<Shard> shards_;
    std::uint64_t doc_count_ = 0;
    std::uint64_t total_terms_ = 0;
};

}  // namespace luandri
