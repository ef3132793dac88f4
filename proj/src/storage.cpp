#include "luandri/storage.hpp"

#include "luandri/error.hpp"

#include <fmt/core.h>
#include <json.hpp>
#include <zlib.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace luandri {

namespace fs = std::filesystem;
using Bytes = std::vector<std::uint8_t>;

static_assert(std::endian::native == std::endian::little, "index writer assumes a little-endian host");

namespace varint {

void append(Bytes& out, std::uint64_t value) {
    while (value >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(value | 0x80));
        value >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(value));
}

bool read(std::span<const std::uint8_t> in, std::size_t& pos, std::uint64_t& value) noexcept {
    value = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos >= in.size()) return false;
        const std::uint8_t byte = in[pos++];
        if (shift == 63 && (byte & 0x7e) != 0) return false;
        value |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
        if ((byte & 0x80) == 0) return true;
    }
    return false;
}

}  // namespace varint

namespace {

constexpr std::array kBinFiles = {"lexicon.bin", "postings.bin", "docs.bin", "fields.bin", "store.bin"};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(::crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

template <typename T>
void put(Bytes& out, T value) {
    std::array<std::uint8_t, sizeof(T)> raw;
    std::memcpy(raw.data(), &value, sizeof(T));
    out.insert(out.end(), raw.begin(), raw.end());
}

void put_string(Bytes& out, std::string_view s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

// Bounds-checked cursor over a verified payload. Running off the end means the
// payload is internally inconsistent, since the checksum already matched.
class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::string file) : bytes_(bytes), file_(std::move(file)) {}

    bool done() const noexcept { return pos_ == bytes_.size(); }
    std::size_t pos() const noexcept { return pos_; }

    template <typename T>
    T get() {
        need(sizeof(T));
        T value;
        std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::string get_string() {
        const auto len = get<std::uint32_t>();
        need(len);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
        pos_ += len;
        return s;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw IndexError(IndexError::Kind::Corrupt, fmt::format("{}: {}", file_, what));
    }

private:
    void need(std::size_t n) const {
        if (n > bytes_.size() - pos_) fail("record runs past end of file");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    std::string file_;
};

void write_file(const fs::path& path, Bytes payload) {
    const auto crc = crc32_of(payload);
    put<std::uint32_t>(payload, crc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) {
        throw IndexError(IndexError::Kind::Io, fmt::format("cannot write {}", path.string()));
    }
}

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IndexError(IndexError::Kind::Io, fmt::format("cannot read {}", path.string()));
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Returns the checksummed payload of a .bin file (trailer stripped).
Bytes load_bin(const fs::path& directory, const std::string& name, std::uint64_t expected_size) {
    Bytes bytes = read_file(directory / name);
    if (bytes.size() < expected_size || bytes.size() < sizeof(std::uint32_t)) {
        throw IndexError(IndexError::Kind::Truncated,
                         fmt::format("{} is truncated ({} of {} bytes)", name, bytes.size(), expected_size));
    }
    if (bytes.size() != expected_size) {
        throw IndexError(IndexError::Kind::Corrupt,
                         fmt::format("{} has {} bytes, manifest says {}", name, bytes.size(), expected_size));
    }
    const auto payload_size = bytes.size() - sizeof(std::uint32_t);
    std::uint32_t stored;
    std::memcpy(&stored, bytes.data() + payload_size, sizeof stored);
    bytes.resize(payload_size);
    if (crc32_of(bytes) != stored) {
        throw IndexError(IndexError::Kind::ChecksumMismatch, fmt::format("{} failed its CRC32 check", name));
    }
    return bytes;
}

void encode_postings(Bytes& out, const PostingList& list) {
    varint::append(out, list.df());
    DocId prev_doc = 0;
    for (const auto& entry : list.entries) {
        varint::append(out, entry.docid - prev_doc);
        prev_doc = entry.docid;
        varint::append(out, entry.tf());
        Position prev_pos = 0;
        for (const auto p : entry.positions) {
            varint::append(out, p - prev_pos);
            prev_pos = p;
        }
    }
}

PostingList decode_postings(std::span<const std::uint8_t> bytes, std::string term) {
    std::size_t pos = 0;
    auto next = [&] {
        std::uint64_t v;
        if (!varint::read(bytes, pos, v)) {
            throw IndexError(IndexError::Kind::Corrupt, fmt::format("postings.bin: bad varint for '{}'", term));
        }
        return v;
    };
    PostingList list;
    const auto df = next();
    if (df > bytes.size()) {
        throw IndexError(IndexError::Kind::Corrupt, fmt::format("postings.bin: implausible df for '{}'", term));
    }
    list.entries.reserve(df);
    DocId doc = 0;
    for (std::uint64_t i = 0; i < df; ++i) {
        doc += next();
        const auto tf = next();
        if (tf > bytes.size()) {
            throw IndexError(IndexError::Kind::Corrupt, fmt::format("postings.bin: implausible tf for '{}'", term));
        }
        Posting entry{doc, {}};
        entry.positions.reserve(tf);
        std::uint64_t p = 0;
        for (std::uint64_t k = 0; k < tf; ++k) {
            p += next();
            if (p > UINT32_MAX) {
                throw IndexError(IndexError::Kind::Corrupt, fmt::format("postings.bin: position overflow for '{}'", term));
            }
            entry.positions.push_back(static_cast<Position>(p));
        }
        list.entries.push_back(std::move(entry));
    }
    if (pos != bytes.size()) {
        throw IndexError(IndexError::Kind::Corrupt, fmt::format("postings.bin: trailing bytes for '{}'", term));
    }
    list.term = std::move(term);
    return list;
}

}  // namespace

void write_index(const IndexSnapshot& snapshot, const fs::path& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) {
        throw IndexError(IndexError::Kind::Io,
                         fmt::format("cannot create {}: {}", directory.string(), ec.message()));
    }

    Bytes lexicon;
    Bytes postings;
    for (const auto& [term, list] : snapshot.lexicon()) {
        const auto offset = postings.size();
        encode_postings(postings, list);
        put_string(lexicon, term);
        put<std::uint64_t>(lexicon, list.cf());
        put<std::uint64_t>(lexicon, list.df());
        put<std::uint64_t>(lexicon, offset);
        put<std::uint64_t>(lexicon, postings.size() - offset);
    }

    Bytes docs;
    for (const auto& doc : snapshot.documents()) {
        put<std::uint64_t>(docs, doc.docid);
        put_string(docs, doc.name);
        put<std::uint64_t>(docs, doc.doclen);
        put<std::uint64_t>(docs, doc.text.offset);
        put<std::uint64_t>(docs, doc.text.length);
    }

    Bytes fields;
    for (const auto& [name, values] : snapshot.fields()) {
        put_string(fields, name);
        put<std::uint64_t>(fields, values.size());
        for (const auto& [docid, value] : values) {
            put<std::uint64_t>(fields, docid);
            put<std::int64_t>(fields, value);
        }
    }

    Bytes store(snapshot.store().begin(), snapshot.store().end());

    const std::array<Bytes*, kBinFiles.size()> payloads = {&lexicon, &postings, &docs, &fields, &store};
    nlohmann::json sizes = nlohmann::json::object();
    for (std::size_t i = 0; i < kBinFiles.size(); ++i) {
        sizes[kBinFiles[i]] = payloads[i]->size() + sizeof(std::uint32_t);
        write_file(directory / kBinFiles[i], std::move(*payloads[i]));
    }

    const auto& stats = snapshot.stats();
    const nlohmann::json manifest = {
        {"version", kIndexFormatVersion},
        {"doc_count", stats.doc_count},
        {"total_terms", stats.total_terms},
        {"vocab_size", stats.vocab_size},
        {"fields", snapshot.field_names()},
        {"files", sizes},
    };
    std::ofstream out(directory / "manifest.json", std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) {
        throw IndexError(IndexError::Kind::Io, fmt::format("cannot write {}", (directory / "manifest.json").string()));
    }
}

IndexSnapshot open_index(const fs::path& directory) {
    const auto manifest_path = directory / "manifest.json";
    if (!fs::is_regular_file(manifest_path)) {
        throw IndexError(IndexError::Kind::MissingManifest,
                         fmt::format("no manifest.json in {}", directory.string()));
    }

    std::uint64_t doc_count = 0, total_terms = 0, vocab_size = 0;
    std::vector<std::string> field_names;
    std::array<std::uint64_t, kBinFiles.size()> sizes{};
    try {
        std::ifstream in(manifest_path);
        const auto manifest = nlohmann::json::parse(in);
        const auto version = manifest.at("version").get<std::uint64_t>();
        if (version != kIndexFormatVersion) {
            throw IndexError(IndexError::Kind::VersionMismatch,
                             fmt::format("index format version {} is not supported (expected {})", version,
                                         kIndexFormatVersion));
        }
        doc_count = manifest.at("doc_count").get<std::uint64_t>();
        total_terms = manifest.at("total_terms").get<std::uint64_t>();
        vocab_size = manifest.at("vocab_size").get<std::uint64_t>();
        field_names = manifest.at("fields").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < kBinFiles.size(); ++i) {
            sizes[i] = manifest.at("files").at(kBinFiles[i]).get<std::uint64_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw IndexError(IndexError::Kind::Corrupt, fmt::format("manifest.json: {}", e.what()));
    }

    for (const auto* name : kBinFiles) {
        if (!fs::is_regular_file(directory / name)) {
            throw IndexError(IndexError::Kind::Io, fmt::format("{} is missing from {}", name, directory.string()));
        }
    }
    const Bytes lexicon_bytes = load_bin(directory, kBinFiles[0], sizes[0]);
    const Bytes postings_bytes = load_bin(directory, kBinFiles[1], sizes[1]);
    const Bytes docs_bytes = load_bin(directory, kBinFiles[2], sizes[2]);
    const Bytes fields_bytes = load_bin(directory, kBinFiles[3], sizes[3]);
    const Bytes store_bytes = load_bin(directory, kBinFiles[4], sizes[4]);

    Lexicon lexicon;
    Reader lex(lexicon_bytes, "lexicon.bin");
    const std::string* previous = nullptr;
    while (!lex.done()) {
        auto term = lex.get_string();
        const auto cf = lex.get<std::uint64_t>();
        const auto df = lex.get<std::uint64_t>();
        const auto offset = lex.get<std::uint64_t>();
        const auto length = lex.get<std::uint64_t>();
        if (previous != nullptr && !(*previous < term)) lex.fail("terms out of order");
        if (offset > postings_bytes.size() || length > postings_bytes.size() - offset) {
            lex.fail(fmt::format("postings locator for '{}' out of range", term));
        }
        auto list = decode_postings(std::span(postings_bytes).subspan(offset, length), term);
        if (list.cf() != cf || list.df() != df) lex.fail(fmt::format("statistics for '{}' disagree", term));
        auto [it, inserted] = lexicon.emplace(std::move(term), std::move(list));
        previous = &it->first;
    }

    std::vector<DocumentRecord> documents;
    Reader dr(docs_bytes, "docs.bin");
    while (!dr.done()) {
        DocumentRecord doc;
        doc.docid = dr.get<std::uint64_t>();
        doc.name = dr.get_string();
        doc.doclen = dr.get<std::uint64_t>();
        doc.text.offset = dr.get<std::uint64_t>();
        doc.text.length = dr.get<std::uint64_t>();
        documents.push_back(std::move(doc));
    }

    NumericFieldTable fields;
    Reader fr(fields_bytes, "fields.bin");
    while (!fr.done()) {
        auto name = fr.get_string();
        const auto count = fr.get<std::uint64_t>();
        FieldValues values;
        DocId prev = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto docid = fr.get<std::uint64_t>();
            const auto value = fr.get<std::int64_t>();
            if (docid <= prev) fr.fail("field docids out of order");
            prev = docid;
            values.emplace_hint(values.end(), docid, value);
        }
        if (!fields.emplace(std::move(name), std::move(values)).second) fr.fail("duplicate field table");
    }

    IndexSnapshot snapshot(std::move(lexicon), std::move(documents), std::move(fields), std::move(field_names),
                           std::string(store_bytes.begin(), store_bytes.end()));
    const auto& stats = snapshot.stats();
    if (stats.doc_count != doc_count || stats.total_terms != total_terms || stats.vocab_size != vocab_size) {
        throw IndexError(IndexError::Kind::Corrupt, "manifest statistics disagree with index contents");
    }
    return snapshot;
}

}  // namespace luandri
