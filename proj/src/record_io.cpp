#include "curator/record_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>

#include "curator/text_util.hpp"

namespace curator {

RecordType record_type_from_string(std::string_view s) {
    if (s == "warcinfo") return RecordType::warcinfo;
    if (s == "request") return RecordType::request;
    if (s == "response") return RecordType::response;
    if (s == "conversion") return RecordType::conversion;
    return RecordType::other;
}

std::string_view to_string(RecordType t) {
    switch (t) {
        case RecordType::warcinfo: return "warcinfo";
        case RecordType::request: return "request";
        case RecordType::response: return "response";
        case RecordType::conversion: return "conversion";
        default: return "other";
    }
}

const std::string* RawRecord::find_header(std::string_view name) const {
    for (const auto& [k, v] : headers)
        if (k.size() == name.size() && starts_with_ci(k, name)) return &v;
    return nullptr;
}

Compression compression_for_path(std::string_view path) {
    if (path.size() > 3 && path.substr(path.size() - 3) == ".gz") return Compression::gzip;
    return Compression::none;
}

namespace {

constexpr size_t kChunk = 64 * 1024;
constexpr size_t kHeaderLimit = 256 * 1024;

// Sliding window over an istream with absolute offset tracking.
class BufferedInput {
public:
    BufferedInput(std::istream& in, uint64_t start_offset) : in_(in), base_(start_offset) {
        if (start_offset > 0) {
            in_.clear();
            in_.seekg(static_cast<std::streamoff>(start_offset));
        }
    }

    std::string_view view() const { return std::string_view(buf_).substr(pos_); }
    uint64_t offset() const { return base_ + pos_; }

    bool fill() {
        if (eof_) return false;
        compact();
        size_t old = buf_.size();
        buf_.resize(old + kChunk);
        in_.read(buf_.data() + old, kChunk);
        size_t got = static_cast<size_t>(in_.gcount());
        buf_.resize(old + got);
        if (got == 0) eof_ = true;
        return got > 0;
    }

    // Ensure at least n unconsumed bytes unless EOF intervenes.
    void want(size_t n) {
        while (view().size() < n && fill()) {}
    }

    void consume(size_t n) { pos_ += std::min(n, buf_.size() - pos_); }

    bool exhausted() { return view().empty() && (eof_ || !fill()); }

private:
    void compact() {
        if (pos_ > 4 * kChunk) {
            buf_.erase(0, pos_);
            base_ += pos_;
            pos_ = 0;
        }
    }

    std::istream& in_;
    std::string buf_;
    size_t pos_ = 0;
    uint64_t base_;
    bool eof_ = false;
};

struct GzipMember {
    std::string data;
    uint64_t offset = 0;
    bool corrupt = false;
    std::string error;
};

// Splits a concatenation of gzip members, recovering at the next member
// magic after a corrupt one.
class GzipMemberSource {
public:
    explicit GzipMemberSource(BufferedInput& input) : input_(input) {
        std::memset(&strm_, 0, sizeof(strm_));
        if (inflateInit2(&strm_, 16 + MAX_WBITS) != Z_OK)
            throw std::runtime_error("zlib init failed");
    }

    ~GzipMemberSource() { inflateEnd(&strm_); }

    std::optional<GzipMember> next(uint64_t size_limit) {
        if (input_.exhausted()) return std::nullopt;
        GzipMember m;
        m.offset = input_.offset();

        input_.want(2);
        std::string_view v = input_.view();
        if (v.size() < 2 || static_cast<unsigned char>(v[0]) != 0x1F ||
            static_cast<unsigned char>(v[1]) != 0x8B) {
            if (first_) throw FormatError("input is not a gzip stream");
            m.corrupt = true;
            m.error = "expected gzip member";
            resync();
            return m;
        }
        first_ = false;

        unsigned char out[kChunk];
        bool oversize = false;
        for (;;) {
            std::string_view w = input_.view();
            if (w.empty()) {
                if (!input_.fill()) {
                    m.corrupt = true;
                    m.error = "truncated gzip member";
                    reset();
                    return m;
                }
                continue;
            }
            strm_.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(w.data()));
            strm_.avail_in = static_cast<uInt>(std::min(w.size(), static_cast<size_t>(1u << 30)));
            uInt fed = strm_.avail_in;
            int ret = Z_OK;
            while (strm_.avail_in > 0 && ret == Z_OK) {
                strm_.next_out = out;
                strm_.avail_out = sizeof(out);
                ret = inflate(&strm_, Z_NO_FLUSH);
                if (ret == Z_OK || ret == Z_STREAM_END || ret == Z_BUF_ERROR) {
                    size_t produced = sizeof(out) - strm_.avail_out;
                    if (!oversize) m.data.append(reinterpret_cast<char*>(out), produced);
                    if (m.data.size() > size_limit) {
                        oversize = true;
                        m.data.clear();
                    }
                }
                if (ret == Z_BUF_ERROR) break;
            }
            input_.consume(fed - strm_.avail_in);
            if (ret == Z_STREAM_END) {
                reset();
                if (oversize) {
                    m.corrupt = true;
                    m.error = "record exceeds size limit";
                }
                return m;
            }
            if (ret != Z_OK && ret != Z_BUF_ERROR) {
                m.corrupt = true;
                m.error = strm_.msg ? strm_.msg : "gzip decode error";
                reset();
                resync();
                return m;
            }
        }
    }

private:
    void reset() {
        if (inflateReset(&strm_) != Z_OK) {
            inflateEnd(&strm_);
            std::memset(&strm_, 0, sizeof(strm_));
            inflateInit2(&strm_, 16 + MAX_WBITS);
        }
    }

    // Advance input to the next plausible member start (1F 8B 08).
    void resync() {
        for (;;) {
            std::string_view v = input_.view();
            size_t at = v.find("\x1f\x8b\x08");
            if (at != std::string_view::npos) {
                input_.consume(at);
                return;
            }
            // keep a 2-byte tail so a magic split across fills is found
            if (v.size() > 2) input_.consume(v.size() - 2);
            if (!input_.fill()) {
                input_.consume(v.size());
                return;
            }
        }
    }

    BufferedInput& input_;
    z_stream strm_;
    bool first_ = true;
};

struct HeaderBlock {
    std::vector<std::pair<std::string, std::string>> headers;
    size_t end = 0; // offset just past the blank line
};

// Parses "WARC/1.0\r\n" + header lines + blank line. Returns an error
// message, or empty string on success.
std::string parse_header_block(std::string_view data, HeaderBlock& out) {
    size_t pos = 0;
    auto next_line = [&](std::string_view& line) -> bool {
        size_t nl = data.find('\n', pos);
        if (nl == std::string_view::npos) return false;
        size_t end = nl;
        if (end > pos && data[end - 1] == '\r') --end;
        line = data.substr(pos, end - pos);
        pos = nl + 1;
        return true;
    };

    std::string_view line;
    if (!next_line(line)) return "missing version line";
    if (!line.starts_with("WARC/")) return "bad version line";

    for (;;) {
        if (!next_line(line)) return "unterminated header block";
        if (line.empty()) break;
        if (line[0] == ' ' || line[0] == '\t') { // folded continuation
            if (out.headers.empty()) return "continuation before first header";
            out.headers.back().second.append(" ").append(trim(line));
            continue;
        }
        size_t colon = line.find(':');
        if (colon == std::string_view::npos) return "malformed header line";
        std::string name(trim(line.substr(0, colon)));
        std::string value(trim(line.substr(colon + 1)));
        if (name.empty()) return "empty header name";
        out.headers.emplace_back(std::move(name), std::move(value));
    }
    out.end = pos;
    return "";
}

const std::string* lookup(const std::vector<std::pair<std::string, std::string>>& headers,
                          std::string_view name) {
    for (const auto& [k, v] : headers)
        if (k.size() == name.size() && starts_with_ci(k, name)) return &v;
    return nullptr;
}

WarcItem build_record(HeaderBlock&& hb, std::string&& payload, uint64_t offset,
                      const std::string& source_path) {
    RawRecord rec;
    rec.headers = std::move(hb.headers);
    rec.payload = std::move(payload);
    rec.byte_offset = offset;
    rec.source_path = source_path;

    if (const std::string* t = lookup(rec.headers, "WARC-Type"))
        rec.record_type = record_type_from_string(*t);
    if (const std::string* id = lookup(rec.headers, "WARC-Record-ID")) rec.record_id = *id;
    if (const std::string* d = lookup(rec.headers, "WARC-Date")) rec.date = *d;
    if (const std::string* u = lookup(rec.headers, "WARC-Target-URI")) rec.target_uri = *u;

    if (rec.record_id.empty())
        return RecordError{offset, "record has no WARC-Record-ID"};
    return rec;
}

} // namespace

struct WarcReader::Impl {
    Impl(std::istream& in, Options o)
        : opts(std::move(o)), input(in, opts.start_offset) {
        Compression mode = opts.compression;
        input.want(2);
        std::string_view v = input.view();
        bool magic = v.size() >= 2 && static_cast<unsigned char>(v[0]) == 0x1F &&
                     static_cast<unsigned char>(v[1]) == 0x8B;
        if (mode == Compression::auto_detect)
            mode = magic ? Compression::gzip : Compression::none;
        else if (mode == Compression::gzip && !v.empty() && !magic)
            throw FormatError("input is not a gzip stream");
        gzip = (mode == Compression::gzip);
        if (gzip) gz = std::make_unique<GzipMemberSource>(input);
    }

    std::optional<WarcItem> next() {
        for (;;) {
            std::optional<WarcItem> item = gzip ? next_gzip() : next_plain();
            if (!item) return std::nullopt;
            if (opts.skip_non_response && std::holds_alternative<RawRecord>(*item) &&
                std::get<RawRecord>(*item).record_type != RecordType::response)
                continue;
            return item;
        }
    }

    std::optional<WarcItem> next_gzip() {
        std::optional<GzipMember> m = gz->next(opts.max_record_bytes);
        if (!m) return std::nullopt;
        if (m->corrupt) return WarcItem(RecordError{m->offset, m->error});

        HeaderBlock hb;
        std::string err = parse_header_block(m->data, hb);
        if (!err.empty()) return WarcItem(RecordError{m->offset, err});

        const std::string* cl = lookup(hb.headers, "Content-Length");
        if (!cl) return WarcItem(RecordError{m->offset, "missing Content-Length"});
        size_t length = 0;
        try {
            length = static_cast<size_t>(std::stoull(*cl));
        } catch (const std::exception&) {
            return WarcItem(RecordError{m->offset, "bad Content-Length"});
        }
        if (m->data.size() - hb.end < length)
            return WarcItem(RecordError{m->offset, "truncated payload"});
        std::string payload = m->data.substr(hb.end, length);
        return build_record(std::move(hb), std::move(payload), m->offset, opts.source_path);
    }

    std::optional<WarcItem> next_plain() {
        // records are separated by \r\n\r\n; skip separators left by the
        // previous record
        for (;;) {
            std::string_view v = input.view();
            size_t skip = 0;
            while (skip < v.size() && (v[skip] == '\r' || v[skip] == '\n')) ++skip;
            input.consume(skip);
            if (!input.view().empty()) break;
            if (!input.fill()) return std::nullopt;
        }

        uint64_t record_offset = input.offset();
        if (first_plain) {
            input.want(5);
            if (!input.view().starts_with("WARC/")) throw FormatError("input is not a WARC stream");
            first_plain = false;
        }

        // buffer the header section up to the blank line
        size_t scan_from = 0;
        size_t block_end;
        for (;;) {
            std::string_view v = input.view();
            size_t at = v.find("\r\n\r\n", scan_from);
            if (at != std::string_view::npos) {
                block_end = at + 4;
                break;
            }
            size_t lf = v.find("\n\n", scan_from);
            if (lf != std::string_view::npos) {
                block_end = lf + 2;
                break;
            }
            if (v.size() > kHeaderLimit) return resync_error(record_offset, "unterminated header block");
            scan_from = v.size() > 4 ? v.size() - 4 : 0;
            if (!input.fill()) return resync_error(record_offset, "unterminated header block");
        }

        HeaderBlock hb;
        std::string err = parse_header_block(input.view().substr(0, block_end), hb);
        if (!err.empty()) return resync_error(record_offset, err);
        input.consume(hb.end);

        const std::string* cl = lookup(hb.headers, "Content-Length");
        if (!cl) return resync_error(record_offset, "missing Content-Length");
        size_t length = 0;
        try {
            length = static_cast<size_t>(std::stoull(*cl));
        } catch (const std::exception&) {
            return resync_error(record_offset, "bad Content-Length");
        }
        if (length > opts.max_record_bytes) return resync_error(record_offset, "record exceeds size limit");

        input.want(length);
        if (input.view().size() < length) {
            input.consume(input.view().size());
            return WarcItem(RecordError{record_offset, "truncated payload"});
        }
        std::string payload(input.view().substr(0, length));
        input.consume(length);
        return build_record(std::move(hb), std::move(payload), record_offset, opts.source_path);
    }

    // On a malformed record, skip to the next WARC version marker.
    std::optional<WarcItem> resync_error(uint64_t offset, const std::string& message) {
        input.consume(1);
        for (;;) {
            std::string_view v = input.view();
            size_t at = v.find("WARC/");
            if (at != std::string_view::npos) {
                input.consume(at);
                break;
            }
            if (v.size() > 4) input.consume(v.size() - 4);
            if (!input.fill()) {
                input.consume(input.view().size());
                break;
            }
        }
        return WarcItem(RecordError{offset, message});
    }

    Options opts;
    BufferedInput input;
    bool gzip = false;
    bool first_plain = true;
    std::unique_ptr<GzipMemberSource> gz;
};

WarcReader::WarcReader(std::istream& in) : WarcReader(in, Options{}) {}

WarcReader::WarcReader(std::istream& in, Options opts)
    : impl_(std::make_unique<Impl>(in, std::move(opts))) {}

WarcReader::~WarcReader() = default;

std::optional<WarcItem> WarcReader::next() {
    return impl_->next();
}

WetReader::WetReader(std::istream& in, WarcReader::Options opts)
    : reader_(in, [&] {
          opts.skip_non_response = false; // WET carries conversion records
          return opts;
      }()) {}

std::optional<WetReader::Item> WetReader::next() {
    for (;;) {
        std::optional<WarcItem> item = reader_.next();
        if (!item) return std::nullopt;
        if (std::holds_alternative<RecordError>(*item))
            return Item(std::get<RecordError>(*item));
        RawRecord& rec = std::get<RawRecord>(*item);
        if (rec.record_type != RecordType::conversion) continue;
        Document doc;
        doc.text = encode_utf8(decode_utf8_replace(rec.payload));
        doc.id = rec.record_id;
        doc.url = rec.target_uri.value_or("");
        doc.date = rec.date;
        doc.file_path = rec.source_path;
        return Item(std::move(doc));
    }
}

namespace {

std::string gzip_compress(std::string_view data) {
    z_stream s{};
    if (deflateInit2(&s, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK)
        throw std::runtime_error("zlib deflate init failed");
    std::string out;
    unsigned char buf[kChunk];
    s.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    s.avail_in = static_cast<uInt>(data.size());
    int ret;
    do {
        s.next_out = buf;
        s.avail_out = sizeof(buf);
        ret = deflate(&s, Z_FINISH);
        out.append(reinterpret_cast<char*>(buf), sizeof(buf) - s.avail_out);
    } while (ret == Z_OK);
    deflateEnd(&s);
    if (ret != Z_STREAM_END) throw std::runtime_error("gzip compression failed");
    return out;
}

bool is_core_header(std::string_view name) {
    static constexpr std::string_view core[] = {"warc-type", "warc-record-id", "warc-date",
                                                "warc-target-uri", "content-length"};
    for (std::string_view c : core)
        if (name.size() == c.size() && starts_with_ci(name, c)) return true;
    return false;
}

} // namespace

WarcWriter::WarcWriter(std::ostream& out, bool gzip) : out_(out), gzip_(gzip) {}

void WarcWriter::write(const RawRecord& rec) {
    std::string block = "WARC/1.0\r\n";
    auto emit = [&](std::string_view name, std::string_view value) {
        block.append(name).append(": ").append(value).append("\r\n");
    };
    emit("WARC-Type", to_string(rec.record_type));
    emit("WARC-Record-ID", rec.record_id);
    emit("WARC-Date", rec.date);
    if (rec.target_uri) emit("WARC-Target-URI", *rec.target_uri);
    for (const auto& [k, v] : rec.headers)
        if (!is_core_header(k)) emit(k, v);
    emit("Content-Length", std::to_string(rec.payload.size()));
    block.append("\r\n");
    block.append(rec.payload);
    block.append("\r\n\r\n");

    if (gzip_) {
        std::string member = gzip_compress(block);
        out_.write(member.data(), static_cast<std::streamsize>(member.size()));
    } else {
        out_.write(block.data(), static_cast<std::streamsize>(block.size()));
    }
}

} // namespace curator
