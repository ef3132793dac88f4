#pragma once

#include "luandri/index.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace luandri {

inline constexpr std::uint32_t kIndexFormatVersion = 1;

/// Writes `manifest.json`, `lexicon.bin`, `postings.bin`, `docs.bin`,
/// `fields.bin` and `store.bin` into `directory`, creating it if needed.
/// Output is canonical: the same snapshot always produces identical bytes.
void write_index(const IndexSnapshot& snapshot, const std::filesystem::path& directory);

/// Throws IndexError with kind MissingManifest, VersionMismatch, Truncated,
/// ChecksumMismatch, Corrupt or Io.
IndexSnapshot open_index(const std::filesystem::path& directory);

namespace varint {

void append(std::vector<std::uint8_t>& out, std::uint64_t value);

/// Decodes one LEB128 value starting at `pos` and advances it. Returns false on
/// overrun or an encoding longer than ten bytes.
bool read(std::span<const std::uint8_t> in, std::size_t& pos, std::uint64_t& value) noexcept;

}  // namespace varint

}  // namespace luandri
