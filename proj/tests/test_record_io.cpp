#include <doctest.h>

#include <sstream>

#include "curator/hashing.hpp"
#include "curator/record_io.hpp"

using namespace curator;

namespace {

RawRecord make_record(RecordType type, const std::string& id, const std::string& payload,
                      const std::string& uri = "") {
    RawRecord rec;
    rec.record_type = type;
    rec.record_id = id;
    rec.date = "2024-01-01T00:00:00Z";
    if (!uri.empty()) rec.target_uri = uri;
    rec.payload = payload;
    return rec;
}

std::vector<std::pair<std::string, std::string>> extra_headers(const RawRecord& rec) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, v] : rec.headers) {
        std::string lower;
        for (char c : k) lower.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
        if (lower == "warc-type" || lower == "warc-record-id" || lower == "warc-date" ||
            lower == "warc-target-uri" || lower == "content-length")
            continue;
        out.emplace_back(k, v);
    }
    return out;
}

bool same_record(const RawRecord& a, const RawRecord& b) {
    return a.record_type == b.record_type && a.record_id == b.record_id && a.date == b.date &&
           a.target_uri == b.target_uri && a.payload == b.payload &&
           extra_headers(a) == extra_headers(b);
}

std::vector<WarcItem> read_all(std::istream& in, WarcReader::Options opts = {}) {
    WarcReader reader(in, opts);
    std::vector<WarcItem> items;
    while (auto item = reader.next()) items.push_back(std::move(*item));
    return items;
}

} // namespace

TEST_CASE("empty stream yields empty sequence") {
    std::istringstream in("");
    CHECK(read_all(in).empty());
}

TEST_CASE("single response record round-trips through the reference writer") {
    for (bool gzip : {true, false}) {
        CAPTURE(gzip);
        RawRecord rec =
            make_record(RecordType::response, "<urn:uuid:1>", "hello world", "http://x.test/");
        std::ostringstream out;
        WarcWriter writer(out, gzip);
        writer.write(rec);

        std::istringstream in(out.str());
        std::vector<WarcItem> items = read_all(in);
        REQUIRE(items.size() == 1);
        REQUIRE(std::holds_alternative<RawRecord>(items[0]));
        const RawRecord& got = std::get<RawRecord>(items[0]);
        CHECK(got.payload == "hello world");
        CHECK(got.payload.size() == 11);
        CHECK(same_record(rec, got));
        CHECK(*got.find_header("Content-Length") == "11");
    }
}

TEST_CASE("three members with a corrupted middle yield two records and one error") {
    std::ostringstream out;
    WarcWriter writer(out, true);
    writer.write(make_record(RecordType::response, "<urn:uuid:a>", "first record payload"));
    size_t first_end = out.str().size();
    writer.write(make_record(RecordType::response, "<urn:uuid:b>", "second record payload"));
    size_t second_end = out.str().size();
    writer.write(make_record(RecordType::response, "<urn:uuid:c>", "third record payload"));

    std::string data = out.str();
    // flip a byte in the middle of the second member's deflate data
    size_t mid = first_end + (second_end - first_end) / 2;
    data[mid] = static_cast<char>(data[mid] ^ 0x5A);

    std::istringstream in(data);
    std::vector<WarcItem> items = read_all(in);
    REQUIRE(items.size() == 3);
    CHECK(std::get<RawRecord>(items[0]).record_id == "<urn:uuid:a>");
    REQUIRE(std::holds_alternative<RecordError>(items[1]));
    CHECK(std::get<RecordError>(items[1]).byte_offset == first_end);
    CHECK(std::get<RawRecord>(items[2]).record_id == "<urn:uuid:c>");
}

TEST_CASE("non-gzip input is an immediate format error in gzip mode") {
    std::istringstream in("definitely not gzip");
    WarcReader::Options opts;
    opts.compression = Compression::gzip;
    CHECK_THROWS_AS(WarcReader(in, opts), FormatError);
}

TEST_CASE("truncated payload reports a positioned error") {
    std::string block =
        "WARC/1.0\r\n"
        "WARC-Type: response\r\n"
        "WARC-Record-ID: <urn:uuid:t>\r\n"
        "WARC-Date: 2024-01-01T00:00:00Z\r\n"
        "Content-Length: 100\r\n"
        "\r\n"
        "only a few bytes";
    std::istringstream in(block);
    std::vector<WarcItem> items = read_all(in);
    REQUIRE(items.size() == 1);
    REQUIRE(std::holds_alternative<RecordError>(items[0]));
    CHECK(std::get<RecordError>(items[0]).message == "truncated payload");
}

TEST_CASE("malformed header block resumes at the next record") {
    std::ostringstream good;
    WarcWriter writer(good, false);
    writer.write(make_record(RecordType::response, "<urn:uuid:ok>", "fine payload here"));

    std::string bad =
        "WARC/1.0\r\n"
        "this line has no colon\r\n"
        "\r\n";
    std::string data = bad + good.str();
    std::istringstream in(data);
    std::vector<WarcItem> items = read_all(in);
    REQUIRE(items.size() == 2);
    CHECK(std::holds_alternative<RecordError>(items[0]));
    CHECK(std::get<RawRecord>(items[1]).record_id == "<urn:uuid:ok>");
}

TEST_CASE("skip_non_response filters request and warcinfo records") {
    std::ostringstream out;
    WarcWriter writer(out, true);
    writer.write(make_record(RecordType::warcinfo, "<urn:uuid:info>", "info"));
    writer.write(make_record(RecordType::request, "<urn:uuid:req>", "GET /"));
    writer.write(make_record(RecordType::response, "<urn:uuid:resp>", "body"));

    std::istringstream in(out.str());
    WarcReader::Options opts;
    opts.skip_non_response = true;
    std::vector<WarcItem> items = read_all(in, opts);
    REQUIRE(items.size() == 1);
    CHECK(std::get<RawRecord>(items[0]).record_id == "<urn:uuid:resp>");
}

TEST_CASE("resumability: reading from a reported byte_offset yields the identical suffix") {
    for (bool gzip : {true, false}) {
        CAPTURE(gzip);
        std::ostringstream out;
        WarcWriter writer(out, gzip);
        for (int i = 0; i < 5; ++i)
            writer.write(make_record(RecordType::response, "<urn:uuid:" + std::to_string(i) + ">",
                                     "payload number " + std::to_string(i)));

        std::istringstream full(out.str());
        std::vector<WarcItem> all = read_all(full);
        REQUIRE(all.size() == 5);

        uint64_t offset = std::get<RawRecord>(all[2]).byte_offset;
        std::istringstream suffix(out.str());
        WarcReader::Options opts;
        opts.start_offset = offset;
        std::vector<WarcItem> rest = read_all(suffix, opts);
        REQUIRE(rest.size() == 3);
        for (size_t i = 0; i < rest.size(); ++i) {
            CHECK(same_record(std::get<RawRecord>(all[i + 2]), std::get<RawRecord>(rest[i])));
            CHECK(std::get<RawRecord>(all[i + 2]).byte_offset ==
                  std::get<RawRecord>(rest[i]).byte_offset);
        }
    }
}

TEST_CASE("randomized round-trip preserves structure") {
    SplitMix64 rng(11);
    auto random_token = [&](size_t max_len) {
        size_t len = 1 + rng.next_below(max_len);
        std::string s;
        for (size_t i = 0; i < len; ++i)
            s.push_back(static_cast<char>('a' + rng.next_below(26)));
        return s;
    };

    std::vector<RawRecord> records;
    std::ostringstream out;
    WarcWriter writer(out, true);
    for (int i = 0; i < 50; ++i) {
        RecordType type = static_cast<RecordType>(rng.next_below(5));
        std::string payload;
        size_t plen = rng.next_below(2000);
        for (size_t k = 0; k < plen; ++k)
            payload.push_back(static_cast<char>(rng.next_below(256)));
        RawRecord rec = make_record(type, "<urn:uuid:" + std::to_string(i) + ">", payload);
        size_t extra = rng.next_below(4);
        for (size_t e = 0; e < extra; ++e)
            rec.headers.emplace_back("X-" + random_token(8), random_token(16));
        writer.write(rec);
        records.push_back(std::move(rec));
    }

    std::istringstream in(out.str());
    std::vector<WarcItem> items = read_all(in);
    REQUIRE(items.size() == records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        REQUIRE(std::holds_alternative<RawRecord>(items[i]));
        CHECK(same_record(records[i], std::get<RawRecord>(items[i])));
    }
}

TEST_CASE("plain mode accounts for every input byte") {
    std::ostringstream out;
    WarcWriter writer(out, false);
    std::vector<size_t> payload_sizes{0, 10, 300};
    for (size_t i = 0; i < payload_sizes.size(); ++i)
        writer.write(make_record(RecordType::response, "<urn:uuid:" + std::to_string(i) + ">",
                                 std::string(payload_sizes[i], 'x')));
    std::string data = out.str();

    std::istringstream in(data);
    std::vector<WarcItem> items = read_all(in);
    REQUIRE(items.size() == 3);
    // framing = version line + header lines + blank line + trailer
    size_t framing = 0;
    size_t payload_total = 0;
    for (const WarcItem& item : items) {
        const RawRecord& r = std::get<RawRecord>(item);
        payload_total += r.payload.size();
        size_t headers = 10; // "WARC/1.0\r\n"
        auto add_header = [&](std::string_view name, std::string_view value) {
            headers += name.size() + 2 + value.size() + 2;
        };
        for (const auto& [k, v] : r.headers) add_header(k, v);
        framing += headers + 2 + 4; // blank line + "\r\n\r\n" trailer
    }
    CHECK(framing + payload_total == data.size());
}

TEST_CASE("wet records become documents with replacement-decoded text") {
    std::ostringstream out;
    WarcWriter writer(out, true);
    writer.write(make_record(RecordType::warcinfo, "<urn:uuid:info>", "software: test"));
    RawRecord conv = make_record(RecordType::conversion, "<urn:uuid:doc>", "Some text.",
                                 "http://site.test/page");
    writer.write(conv);
    RawRecord invalid = make_record(RecordType::conversion, "<urn:uuid:bad>",
                                    std::string("bad\xFF") + "byte", "http://site.test/other");
    writer.write(invalid);

    std::istringstream in(out.str());
    WetReader reader(in);
    std::vector<WetReader::Item> items;
    while (auto item = reader.next()) items.push_back(std::move(*item));
    REQUIRE(items.size() == 2); // warcinfo skipped
    const Document& doc = std::get<Document>(items[0]);
    CHECK(doc.text == "Some text.");
    CHECK(doc.id == "<urn:uuid:doc>");
    CHECK(doc.url == "http://site.test/page");
    const Document& bad = std::get<Document>(items[1]);
    CHECK(bad.text == std::string("bad\xEF\xBF\xBD") + "byte");
}

TEST_CASE("empty wet stream yields empty sequence") {
    std::istringstream in("");
    WetReader reader(in);
    CHECK(!reader.next().has_value());
}
