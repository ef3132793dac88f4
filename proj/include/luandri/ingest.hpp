#pragma once

#include "luandri/error.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace luandri {

/// One ingested document. Token i sits at position i, so positions are implicit.
struct RawDocument {
    std::string name;
    std::vector<std::string> tokens;
    std::map<std::string, std::int64_t> fields;

    friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

/// Parses concatenated `<DOC>` blocks. Each block needs one `<DOCNO>` and one
/// `<TEXT>`; for each requested field name `f` the first `<f>...</f>` element in
/// the block is read as a decimal int64. Non-integer field content is skipped
/// and reported through `warn`.
std::vector<RawDocument> parse_trec(std::string_view bytes,
                                    const std::set<std::string>& field_names,
                                    const WarningSink& warn = {});

RawDocument parse_plaintext(std::string_view name, std::string_view bytes);

}  // namespace luandri
