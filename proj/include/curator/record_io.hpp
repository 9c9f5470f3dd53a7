#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "curator/document.hpp"

namespace curator {

enum class RecordType { warcinfo, request, response, conversion, other };

RecordType record_type_from_string(std::string_view s);
std::string_view to_string(RecordType t);

// One parsed WARC/WET record. Headers keep file order; lookups are
// case-insensitive on the name.
struct RawRecord {
    RecordType record_type = RecordType::other;
    std::vector<std::pair<std::string, std::string>> headers;
    std::optional<std::string> target_uri;
    std::string record_id;
    std::string date;
    std::string payload;
    std::string source_path;
    uint64_t byte_offset = 0;

    const std::string* find_header(std::string_view name) const;
};

// A record that could not be parsed. Reading continues at the next gzip
// member (or the next record marker for uncompressed input).
struct RecordError {
    uint64_t byte_offset = 0;
    std::string message;
};

using WarcItem = std::variant<RawRecord, RecordError>;

// Input that is not in the expected container format at all.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Compression { none, gzip, auto_detect };

// Streams records out of a WARC 1.0 archive. For .gz input every record is
// expected to be its own gzip member and byte_offset is the compressed
// offset of that member, so a reader constructed with start_offset at any
// reported byte_offset yields the identical record suffix.
class WarcReader {
public:
    struct Options {
        bool skip_non_response = false;
        uint64_t start_offset = 0;
        Compression compression = Compression::auto_detect;
        std::string source_path;
        uint64_t max_record_bytes = 512ULL << 20;
    };

    explicit WarcReader(std::istream& in);
    WarcReader(std::istream& in, Options opts);
    ~WarcReader();

    WarcReader(const WarcReader&) = delete;
    WarcReader& operator=(const WarcReader&) = delete;

    // nullopt at end of stream.
    std::optional<WarcItem> next();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Reads WET conversion records as Documents. Payload bytes are decoded as
// UTF-8 with invalid sequences replaced.
class WetReader {
public:
    using Item = std::variant<Document, RecordError>;

    explicit WetReader(std::istream& in, WarcReader::Options opts = {});
    std::optional<Item> next();

private:
    WarcReader reader_;
};

// Minimal reference writer; produces one gzip member per record (or plain
// WARC framing) for fixtures and round-trip checks.
class WarcWriter {
public:
    explicit WarcWriter(std::ostream& out, bool gzip = true);
    void write(const RawRecord& rec);

private:
    std::ostream& out_;
    bool gzip_;
};

// Convenience: true if the path looks like a gzip container.
Compression compression_for_path(std::string_view path);

} // namespace curator
