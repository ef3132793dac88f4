#pragma once

#include "luandri/index.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace luandri {

struct SnippetConfig {
    std::size_t window_width = 30;
    std::string open_marker = "<b>";
    std::string close_marker = "</b>";
};

/// First position of the `width`-token window holding the most matches
/// (leftmost on ties). `matches` must be sorted.
std::size_t best_window_start(std::size_t doclen, std::span<const Position> matches, std::size_t width);

/// Renders the best window of `tokens`, wrapping matched tokens in the markers
/// and adding "... " / " ..." where the window stops short of the document
/// edges. `matches` must be sorted and unique.
std::string generate_snippet(std::span<const std::string_view> tokens,
                             std::span<const Position> matches,
                             const SnippetConfig& config = {});

}  // namespace luandri
