#include "luandri/window.hpp"

#include <algorithm>

namespace luandri {

std::vector<Position> eval_ordered_window(std::uint32_t width,
                                          std::span<const PositionList> term_positions,
                                          std::vector<Position>* covered) {
    std::vector<Position> starts;
    if (term_positions.size() < 2 || width == 0) return starts;
    std::vector<Position> chain(term_positions.size());
    for (const auto anchor : term_positions.front()) {
        auto current = anchor;
        chain[0] = anchor;
        bool complete = true;
        for (std::size_t t = 1; t < term_positions.size(); ++t) {
            const auto& list = term_positions[t];
            const auto next = std::upper_bound(list.begin(), list.end(), current);
            if (next == list.end() || *next - current > width) {
                complete = false;
                break;
            }
            current = *next;
            chain[t] = current;
        }
        if (complete) {
            starts.push_back(anchor);
            if (covered) covered->insert(covered->end(), chain.begin(), chain.end());
        }
    }
    return starts;
}

std::vector<Position> eval_unordered_window(std::uint32_t width,
                                            std::span<const PositionList> term_positions,
                                            std::vector<Position>* covered) {
    std::vector<Position> starts;
    const auto k = term_positions.size();
    if (k < 2 || width == 0) return starts;

    // A repeated term needs that many occurrences inside the interval. Repeats
    // carry identical position lists, so group them by content.
    std::vector<std::size_t> group(k);
    std::vector<std::size_t> required;
    for (std::size_t t = 0; t < k; ++t) {
        std::size_t g = required.size();
        for (std::size_t u = 0; u < t; ++u) {
            if (std::ranges::equal(term_positions[u], term_positions[t])) {
                g = group[u];
                break;
            }
        }
        if (g == required.size()) required.push_back(0);
        group[t] = g;
        ++required[g];
    }

    struct Occurrence {
        Position pos;
        std::size_t group;
    };
    std::vector<Occurrence> merged;
    std::vector<bool> seen(required.size(), false);
    for (std::size_t t = 0; t < k; ++t) {
        if (seen[group[t]]) continue;
        seen[group[t]] = true;
        for (const auto p : term_positions[t]) merged.push_back({p, group[t]});
    }
    std::ranges::sort(merged, {}, &Occurrence::pos);

    const auto budget = static_cast<std::uint64_t>(width) * k;
    std::vector<std::size_t> counts(required.size(), 0);
    std::size_t missing = required.size();
    std::size_t end = 0;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        while (missing > 0 && end < merged.size()) {
            const auto g = merged[end++].group;
            if (++counts[g] == required[g]) --missing;
        }
        if (missing > 0) break;
        const auto g = merged[i].group;
        // [i, end) is the shortest satisfying interval starting at i; it is
        // minimal when dropping its left end breaks it.
        if (counts[g] == required[g]) {
            const std::uint64_t span = merged[end - 1].pos - merged[i].pos + 1;
            if (span <= budget) {
                starts.push_back(merged[i].pos);
                if (covered) {
                    for (std::size_t m = i; m < end; ++m) covered->push_back(merged[m].pos);
                }
            }
        }
        if (counts[g]-- == required[g]) ++missing;
    }
    return starts;
}

}  // namespace luandri
