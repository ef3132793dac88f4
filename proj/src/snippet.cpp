#include "luandri/snippet.hpp"

#include <algorithm>

namespace luandri {

std::size_t best_window_start(std::size_t doclen, std::span<const Position> matches, std::size_t width) {
    if (width == 0 || doclen <= width) return 0;
    std::size_t best = 0;
    std::size_t best_count = 0;
    std::size_t lo = 0;  // first match >= start
    std::size_t hi = 0;  // first match >= start + width
    for (std::size_t start = 0; start + width <= doclen; ++start) {
        while (lo < matches.size() && matches[lo] < start) ++lo;
        while (hi < matches.size() && matches[hi] < start + width) ++hi;
        const auto count = hi - lo;
        if (count > best_count) {
            best_count = count;
            best = start;
        }
    }
    return best;
}

std::string generate_snippet(std::span<const std::string_view> tokens,
                             std::span<const Position> matches,
                             const SnippetConfig& config) {
    const auto width = std::max<std::size_t>(config.window_width, 1);
    const auto start = best_window_start(tokens.size(), matches, width);
    const auto end = std::min(tokens.size(), start + width);

    std::string out;
    if (start > 0) out += "... ";
    auto next = std::lower_bound(matches.begin(), matches.end(), start);
    for (auto i = start; i < end; ++i) {
        if (i > start) out += ' ';
        const bool hit = next != matches.end() && *next == i;
        if (hit) {
            out += config.open_marker;
            out += tokens[i];
            out += config.close_marker;
            ++next;
        } else {
            out += tokens[i];
        }
    }
    if (end < tokens.size()) out += " ...";
    return out;
}

}  // namespace luandri
