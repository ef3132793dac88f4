#include "luandri/environment.hpp"

#include "luandri/storage.hpp"

#include <algorithm>

namespace luandri {

void QueryEnvironment::add_index(std::shared_ptr<const IndexSnapshot> snapshot) {
    const auto& stats = snapshot->stats();
    shards_.push_back(Shard{std::move(snapshot), doc_count_});
    doc_count_ += stats.doc_count;
    total_terms_ += stats.total_terms;
}

void QueryEnvironment::add_index(const std::filesystem::path& directory) {
    add_index(std::make_shared<const IndexSnapshot>(open_index(directory)));
}

std::optional<std::pair<const QueryEnvironment::Shard*, DocId>> QueryEnvironment::locate(DocId docid) const {
    if (docid == 0 || docid > doc_count_) return std::nullopt;
    // Last shard whose offset is below docid.
    const auto it = std::partition_point(shards_.begin(), shards_.end(),
                                         [docid](const Shard& s) { return s.offset < docid; });
    auto shard = std::prev(it);
    // Skip back over empty shards sharing the same offset.
    while (shard->snapshot->stats().doc_count == 0) --shard;
    return std::pair{&*shard, docid - shard->offset};
}

std::optional<std::int64_t> QueryEnvironment::field_value(std::string_view field, DocId docid) const {
    const auto where = locate(docid);
    if (!where) return std::nullopt;
    return where->first->snapshot->field_value(field, where->second);
}

}  // namespace luandri
