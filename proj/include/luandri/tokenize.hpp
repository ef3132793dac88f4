#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace luandri {

/// Splits UTF-8 text into maximal runs of Unicode letters/digits, lowercased.
/// Everything else separates. Throws IngestError on malformed UTF-8, with the
/// offset of the first bad byte.
std::vector<std::string> tokenize(std::string_view text);

/// Byte offset of the first malformed UTF-8 sequence, or npos when valid.
std::size_t find_invalid_utf8(std::string_view text) noexcept;

}  // namespace luandri
