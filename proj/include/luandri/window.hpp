#pragma once

#include "luandri/index.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace luandri {

using PositionList = std::span<const Position>;

/// Ordered window. For each occurrence p1 of the first term, repeatedly take
/// the nearest occurrence of the next term that is after the current position
/// and no more than `width` past it. Returns p1 for every anchor that reaches
/// the last term. If `covered` is given, every position used by a match is
/// appended to it (unsorted).
std::vector<Position> eval_ordered_window(std::uint32_t width,
                                          std::span<const PositionList> term_positions,
                                          std::vector<Position>* covered = nullptr);

/// Unordered window. Returns the left end of every minimal interval that holds
/// each term (as many times as it is repeated in the list) and spans at most
/// width * term_positions.size() positions. `covered` as above.
std::vector<Position> eval_unordered_window(std::uint32_t width,
                                            std::span<const PositionList> term_positions,
                                            std::vector<Position>* covered = nullptr);

}  // namespace luandri
