#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "curator/hashing.hpp"
#include "curator/text_extraction.hpp"
#include "curator/text_util.hpp"

using namespace curator;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fixture_dir() {
    fs::path p = fs::path(CURATOR_TEST_DIR) / "fixtures" / "extraction";
    REQUIRE(fs::exists(p));
    return p;
}

struct Fixture {
    std::string name;
    std::string html;
    std::optional<std::string> expected; // nullopt = extraction must return none
};

const std::vector<Fixture>& load_fixtures() {
    static const std::vector<Fixture> fixtures = [] {
        std::vector<Fixture> out;
        for (const auto& entry : fs::directory_iterator(fixture_dir())) {
            if (entry.path().extension() != ".html") continue;
            Fixture f;
            f.name = entry.path().stem().string();
            f.html = slurp(entry.path());
            fs::path expected = entry.path().parent_path() / (f.name + ".expected.txt");
            if (fs::exists(expected)) f.expected = slurp(expected);
            out.push_back(std::move(f));
        }
        std::sort(out.begin(), out.end(),
                  [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
        return out;
    }();
    return fixtures;
}

} // namespace

TEST_CASE("fixture corpus is extracted exactly") {
    REQUIRE(load_fixtures().size() >= 20);
    for (const Fixture& f : load_fixtures()) {
        CAPTURE(f.name);
        std::string reason;
        std::optional<ExtractedText> got = extract_main_text(f.html, {}, {}, &reason);
        if (!f.expected) {
            CHECK(!got.has_value());
            CHECK(!reason.empty());
        } else {
            REQUIRE(got.has_value());
            CHECK(got->text == *f.expected);
        }
    }
}

TEST_CASE("single paragraph survives on its own") {
    auto got = extract_main_text("<html><body><p>A full sentence here.</p></body></html>");
    REQUIRE(got.has_value());
    CHECK(got->text == "A full sentence here.");
    CHECK(got->line_count == 1);
    CHECK(got->mode == ExtractionMode::heuristic_warc);
}

TEST_CASE("script-only page extracts to none") {
    std::string reason;
    CHECK(!extract_main_text("<script>var x=1;</script>", {}, {}, &reason).has_value());
    CHECK(reason == "too_few_lines");
}

TEST_CASE("non-html payload is rejected with a reason") {
    std::string reason;
    CHECK(!extract_main_text("%PDF-1.4 binary soup follows here", {}, {}, &reason).has_value());
    CHECK(reason == "not_html");
}

TEST_CASE("empty payload is rejected") {
    std::string reason;
    CHECK(!extract_main_text("", {}, {}, &reason).has_value());
    CHECK(reason == "empty");
}

TEST_CASE("line_count matches nonempty lines") {
    for (const Fixture& f : load_fixtures()) {
        if (!f.expected) continue;
        auto got = extract_main_text(f.html);
        REQUIRE(got.has_value());
        int nonempty = 0;
        for (std::string_view l : split_lines(got->text))
            if (!l.empty()) ++nonempty;
        CHECK(got->line_count == nonempty);
    }
}

TEST_CASE("output never contains tags or raw script/style content") {
    for (const Fixture& f : load_fixtures()) {
        if (!f.expected) continue;
        // decoded entities may legitimately put tag-shaped text in content
        if (f.expected->find('<') != std::string::npos) continue;
        auto got = extract_main_text(f.html);
        REQUIRE(got.has_value());
        CAPTURE(f.name);
        CHECK(got->text.find("<script") == std::string::npos);
        CHECK(got->text.find("<style") == std::string::npos);
        // anything that parses as an HTML tag: '<' optional '/' letters '>'
        for (size_t i = 0; i < got->text.size(); ++i) {
            if (got->text[i] != '<') continue;
            size_t j = i + 1;
            if (j < got->text.size() && got->text[j] == '/') ++j;
            size_t name_start = j;
            while (j < got->text.size() && std::isalpha(static_cast<unsigned char>(got->text[j])))
                ++j;
            bool tag_like = j > name_start && j < got->text.size() && got->text[j] == '>';
            CHECK(!tag_like);
        }
    }
}

TEST_CASE("adding boilerplate blocks never changes extracted text") {
    const std::string nav = "<nav><a href=\"/\">Home</a> <a href=\"/a\">About</a></nav>";
    const std::string footer = "<footer>Copyright 2021 Some Site</footer>";
    for (const Fixture& f : load_fixtures()) {
        if (!f.expected) continue;
        size_t body = f.html.find("<body>");
        if (body == std::string::npos) continue;
        std::string with_nav = f.html;
        with_nav.insert(body + 6, nav);
        size_t close = with_nav.find("</body>");
        if (close != std::string::npos) with_nav.insert(close, footer);
        auto got = extract_main_text(with_nav);
        CAPTURE(f.name);
        REQUIRE(got.has_value());
        CHECK(got->text == *f.expected);
    }
}

TEST_CASE("identical bytes give identical extraction") {
    for (const Fixture& f : load_fixtures()) {
        auto a = extract_main_text(f.html);
        auto b = extract_main_text(f.html);
        CHECK(a.has_value() == b.has_value());
        if (a && b) {
            CHECK(a->text == b->text);
            CHECK(a->line_count == b->line_count);
        }
    }
}

TEST_CASE("declared charset parameter wins over meta sniffing") {
    // bytes are latin-1 but meta claims utf-8; the caller's param must win
    std::string html =
        "<html><head><meta charset=\"utf-8\"></head><body><p>Latin caf\xe9 text byte here.</p>"
        "</body></html>";
    auto got = extract_main_text(html, std::string_view("iso-8859-1"));
    REQUIRE(got.has_value());
    CHECK(got->text == "Latin caf\xc3\xa9 text byte here.");
}

TEST_CASE("normalize_text examples") {
    CHECK(normalize_text("a\r\nb") == "a\nb");
    CHECK(normalize_text("a\n\n\n\nb") == "a\n\nb");
}

TEST_CASE("decode_entities handles named, numeric and malformed forms") {
    CHECK(decode_entities("&amp;") == "&");
    CHECK(decode_entities("&#65;&#x41;") == "AA");
    CHECK(decode_entities("&notanentity;") == "&notanentity;");
    CHECK(decode_entities("&#xZZ;") == "&#xZZ;");
    CHECK(decode_entities("a & b") == "a & b");
    CHECK(decode_entities("&nbsp;") == "\xc2\xa0");
}

TEST_CASE("link-density boundary: exactly half link text is kept") {
    // 10 link chars of 20 total: density 0.5 is not greater than 0.5
    std::string html =
        "<html><body><p><a href=\"/x\">ten__chars</a>ten__chars</p>"
        "<p>Second filler sentence to stay above limits.</p></body></html>";
    auto got = extract_main_text(html);
    REQUIRE(got.has_value());
    CHECK(got->text.find("ten__charsten__chars") != std::string::npos);
}

TEST_CASE("no 3+ newline runs in any output") {
    SplitMix64 rng(5);
    for (const Fixture& f : load_fixtures()) {
        if (!f.expected) continue;
        auto got = extract_main_text(f.html);
        REQUIRE(got.has_value());
        CHECK(got->text.find("\n\n\n") == std::string::npos);
    }
}
