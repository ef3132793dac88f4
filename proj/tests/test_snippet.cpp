#include "luandri/snippet.hpp"

#include <doctest.h>

#include <random>

using namespace luandri;

namespace {

std::vector<std::string_view> views(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("whole document fits in the window") {
    const std::vector<std::string> doc{"deep", "learning", "is", "fun"};
    const std::vector<Position> matches{0, 1};
    CHECK(generate_snippet(views(doc), matches) == "<b>deep</b> <b>learning</b> is fun");
}

TEST_CASE("window centres on the densest cluster with ellipses") {
    std::vector<std::string> doc;
    for (int i = 0; i < 100; ++i) doc.push_back("t" + std::to_string(i));
    const std::vector<Position> matches{3, 50, 51, 52};
    SnippetConfig config;
    config.window_width = 10;
    const auto s = generate_snippet(views(doc), matches, config);
    // leftmost window holding 50..52 starts at 43
    CHECK(best_window_start(doc.size(), matches, 10) == 43);
    CHECK(s.starts_with("... t43 "));
    CHECK(s.ends_with("<b>t52</b> ..."));
    CHECK(s.find("<b>t50</b> <b>t51</b> <b>t52</b>") != std::string::npos);
}

TEST_CASE("no matches gives the first window without markers") {
    const std::vector<std::string> doc{"a", "b", "c", "d"};
    SnippetConfig config;
    config.window_width = 2;
    CHECK(generate_snippet(views(doc), {}, config) == "a b ...");
    CHECK(generate_snippet({}, {}, config).empty());
}

TEST_CASE("chosen window has maximal match count and balanced markers") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t len = rng() % 60;
        const std::size_t width = 1 + rng() % 12;
        std::vector<std::string> doc(len, "w");
        std::vector<Position> matches;
        for (std::size_t i = 0; i < len; ++i) {
            if (rng() % 4 == 0) matches.push_back(static_cast<Position>(i));
        }
        const auto start = best_window_start(len, matches, width);
        auto count_in = [&](std::size_t s) {
            std::size_t c = 0;
            for (const auto m : matches) c += (m >= s && m < s + width);
            return c;
        };
        std::size_t best = 0;
        std::size_t best_start = 0;
        for (std::size_t s = 0; s + width <= std::max(len, width); ++s) {
            if (count_in(s) > best) {
                best = count_in(s);
                best_start = s;
            }
        }
        CHECK(count_in(start) == best);
        CHECK(start == best_start);

        SnippetConfig config;
        config.window_width = width;
        const auto snippet = generate_snippet(views(doc), matches, config);
        std::size_t opens = 0, closes = 0;
        for (auto p = snippet.find("<b>"); p != std::string::npos; p = snippet.find("<b>", p + 1)) ++opens;
        for (auto p = snippet.find("</b>"); p != std::string::npos; p = snippet.find("</b>", p + 1)) ++closes;
        CHECK(opens == closes);
        CHECK(opens == best);
    }
}
