#include "luandri/error.hpp"
#include "luandri/index.hpp"
#include "luandri/storage.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

using namespace luandri;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("luandri_index_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

IndexSnapshot two_docs() {
    const std::vector<RawDocument> docs{{"d1", {"a"}, {}}, {"d2", {"a", "a"}, {{"year", 2001}}}};
    return build_index(docs);
}

}  // namespace

TEST_CASE("build_index on an empty corpus") {
    const auto s = build_index({});
    CHECK(s.stats() == CollectionStats{0, 0, 0});
    CHECK(s.documents().empty());
}

TEST_CASE("build_index accounting on small corpora") {
    const std::vector<RawDocument> one{{"x", {"a", "b", "a"}, {}}};
    const auto s = build_index(one);
    REQUIRE(s.postings("a") != nullptr);
    CHECK(s.postings("a")->cf() == 2);
    CHECK(s.postings("b")->cf() == 1);
    CHECK(s.stats().total_terms == 3);
    CHECK(s.postings("a")->entries == std::vector<Posting>{{1, {0, 2}}});

    const auto two = two_docs();
    CHECK(two.postings("a")->df() == 2);
    CHECK(two.postings("a")->cf() == 3);
    CHECK(two.postings("a")->entries == std::vector<Posting>{{1, {0}}, {2, {0, 1}}});
    CHECK(two.postings("zzz") == nullptr);
    CHECK(two.field_value("year", 2) == 2001);
    CHECK(!two.field_value("year", 1));
    CHECK(two.document(2)->name == "d2");
    CHECK(two.document(3) == nullptr);
    CHECK(two.stored_text(2) == "a a");
}

TEST_CASE("build_index rejects duplicate names") {
    const std::vector<RawDocument> docs{{"d", {"a"}, {}}, {"d", {"b"}, {}}};
    try {
        build_index(docs);
        FAIL("expected IndexError");
    } catch (const IndexError& e) {
        CHECK(e.kind() == IndexError::Kind::DuplicateName);
    }
}

TEST_CASE("zero-token documents are allowed") {
    const std::vector<RawDocument> docs{{"empty", {}, {}}, {"full", {"x"}, {}}};
    const auto s = build_index(docs);
    CHECK(s.document(1)->doclen == 0);
    CHECK(s.document_tokens(1).empty());
    CHECK(s.stats().total_terms == 1);
}

TEST_CASE("accounting invariants hold on random corpora") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto docs = oracle::random_corpus(rng, 20, 10, 30);
        const auto s = build_index(oracle::as_raw(docs));
        std::uint64_t cf_sum = 0;
        for (const auto& [term, list] : s.lexicon()) {
            CHECK(list.df() <= s.stats().doc_count);
            std::uint64_t tf_sum = 0;
            for (const auto& e : list.entries) {
                tf_sum += e.tf();
                CHECK(oracle::occurrences(docs[e.docid - 1], term).size() == e.tf());
            }
            CHECK(tf_sum == list.cf());
            cf_sum += list.cf();
        }
        CHECK(cf_sum == s.stats().total_terms);
        for (std::size_t d = 0; d < docs.size(); ++d) {
            const auto tokens = s.document_tokens(d + 1);
            CHECK(std::vector<std::string>(tokens.begin(), tokens.end()) == docs[d]);
        }
    }
}

TEST_CASE("write/open round trip and canonical bytes") {
    const auto s = two_docs();
    const auto dir = scratch("roundtrip");
    write_index(s, dir);
    const auto loaded = open_index(dir);
    CHECK(loaded == s);
    CHECK(loaded.postings("a")->entries == s.postings("a")->entries);

    const auto first = slurp(dir / "postings.bin");
    write_index(s, dir);
    CHECK(slurp(dir / "postings.bin") == first);
    for (const char* f : {"manifest.json", "lexicon.bin", "docs.bin", "fields.bin", "store.bin"}) {
        const auto again = scratch("roundtrip2");
        write_index(s, again);
        CHECK(slurp(dir / f) == slurp(again / f));
    }
}

TEST_CASE("postings.bin layout is bit-exact") {
    // single term "a": df=2, doc1 delta 1, tf 1, pos 0; doc2 delta 1, tf 2, pos deltas 0,1
    const auto dir = scratch("layout");
    write_index(two_docs(), dir);
    const auto bytes = slurp(dir / "postings.bin");
    REQUIRE(bytes.size() == 8 + 4);
    const std::string payload("\x02\x01\x01\x00\x01\x02\x00\x01", 8);
    CHECK(bytes.substr(0, 8) == payload);

    const auto lexicon = slurp(dir / "lexicon.bin");
    // u32 len, "a", u64 cf=3, u64 df=2, u64 offset=0, u64 len=8, u32 crc
    REQUIRE(lexicon.size() == 4 + 1 + 32 + 4);
    CHECK(lexicon.substr(0, 5) == std::string("\x01\x00\x00\x00" "a", 5));
    CHECK(static_cast<unsigned char>(lexicon[5]) == 3);
    CHECK(static_cast<unsigned char>(lexicon[13]) == 2);
    CHECK(static_cast<unsigned char>(lexicon[29]) == 8);
}

TEST_CASE("varints encode and decode LEB128") {
    for (const std::uint64_t v : {0ull, 1ull, 127ull, 128ull, 300ull, 1ull << 35, ~0ull}) {
        std::vector<std::uint8_t> out;
        varint::append(out, v);
        std::size_t pos = 0;
        std::uint64_t back = 0;
        REQUIRE(varint::read(out, pos, back));
        CHECK(back == v);
        CHECK(pos == out.size());
    }
    std::vector<std::uint8_t> out;
    varint::append(out, 300);
    CHECK(out == std::vector<std::uint8_t>{0xac, 0x02});
    std::size_t pos = 0;
    std::uint64_t v;
    const std::vector<std::uint8_t> dangling{0x80};
    CHECK(!varint::read(dangling, pos, v));
}

TEST_CASE("open_index load errors are distinct") {
    auto kind_of = [](const fs::path& dir) {
        try {
            open_index(dir);
        } catch (const IndexError& e) {
            return e.kind();
        }
        FAIL("expected IndexError");
        return IndexError::Kind::Io;
    };

    const auto empty = scratch("empty");
    fs::create_directories(empty);
    CHECK(kind_of(empty) == IndexError::Kind::MissingManifest);

    const auto dir = scratch("errors");
    write_index(two_docs(), dir);

    SUBCASE("version mismatch") {
        auto manifest = slurp(dir / "manifest.json");
        manifest.replace(manifest.find("\"version\": 1"), 12, "\"version\": 2");
        std::ofstream(dir / "manifest.json", std::ios::trunc) << manifest;
        CHECK(kind_of(dir) == IndexError::Kind::VersionMismatch);
    }
    SUBCASE("truncated file") {
        const auto bytes = slurp(dir / "docs.bin");
        std::ofstream(dir / "docs.bin", std::ios::binary | std::ios::trunc) << bytes.substr(0, bytes.size() - 3);
        CHECK(kind_of(dir) == IndexError::Kind::Truncated);
    }
    SUBCASE("checksum failure") {
        auto bytes = slurp(dir / "store.bin");
        bytes[0] ^= 0x20;
        std::ofstream(dir / "store.bin", std::ios::binary | std::ios::trunc) << bytes;
        CHECK(kind_of(dir) == IndexError::Kind::ChecksumMismatch);
    }
    SUBCASE("missing bin file") {
        fs::remove(dir / "fields.bin");
        CHECK(kind_of(dir) == IndexError::Kind::Io);
    }
    SUBCASE("garbled manifest") {
        std::ofstream(dir / "manifest.json", std::ios::trunc) << "{ not json";
        CHECK(kind_of(dir) == IndexError::Kind::Corrupt);
    }
}
