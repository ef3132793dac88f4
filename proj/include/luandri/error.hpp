#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace luandri {

/// Receives non-fatal diagnostics (skipped fields, ignored docids, ...).
using WarningSink = std::function<void(std::string_view)>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Corpus could not be turned into documents.
class IngestError : public Error {
public:
    IngestError(std::string message, std::size_t offset)
        : Error(std::move(message)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IndexError : public Error {
public:
    enum class Kind {
        DuplicateName,
        MissingManifest,
        VersionMismatch,
        Truncated,
        ChecksumMismatch,
        Corrupt,
        Io,
    };

    IndexError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Query text rejected by the parser. `offset` is a byte offset into the query.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected, std::string found);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t offset_;
    std::string expected_;
    std::string found_;
};

class RetrievalError : public Error {
public:
    using Error::Error;
};

}  // namespace luandri
