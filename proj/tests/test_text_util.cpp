#include <doctest.h>

#include "curator/hashing.hpp"
#include "curator/text_util.hpp"

using namespace curator;

TEST_CASE("normalize_text basic rewrites") {
    CHECK(normalize_text("a\r\nb") == "a\nb");
    CHECK(normalize_text("a\n\n\n\nb") == "a\n\nb");
    CHECK(normalize_text("a  \t\nb") == "a\nb");
    CHECK(normalize_text("") == "");
    CHECK(normalize_text("plain") == "plain");
    CHECK(normalize_text("a\rb") == "a\nb"); // lone CR
}

TEST_CASE("normalize_text composes combining sequences") {
    // e + combining acute -> precomposed
    std::string decomposed = "caf\x65\xcc\x81";
    std::string composed = normalize_text(decomposed);
    CHECK(composed == "caf\xc3\xa9");
}

TEST_CASE("normalize_text is idempotent on fuzz inputs") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::string s;
        size_t len = rng.next_below(200);
        for (size_t i = 0; i < len; ++i) {
            switch (rng.next_below(8)) {
                case 0: s.push_back('\n'); break;
                case 1: s.push_back('\r'); break;
                case 2: s.push_back(' '); break;
                case 3: s.push_back('\t'); break;
                case 4: append_utf8(s, 0x300 + static_cast<char32_t>(rng.next_below(0x40))); break;
                case 5: append_utf8(s, static_cast<char32_t>(0x61 + rng.next_below(26))); break;
                case 6: append_utf8(s, static_cast<char32_t>(rng.next_below(0x500) + 0x20)); break;
                default: s.push_back(static_cast<char>(rng.next_below(256))); break;
            }
        }
        std::string once = normalize_text(s);
        CHECK(normalize_text(once) == once);
    }
}

TEST_CASE("utf8 decode replaces invalid sequences") {
    std::string bad = "ok\xFFgo";
    std::u32string cps = decode_utf8_replace(bad);
    REQUIRE(cps.size() == 5);
    CHECK(cps[2] == kReplacementChar);
    CHECK(codepoint_count(bad) == 5);
}

TEST_CASE("whitespace_split handles unicode spaces") {
    std::vector<std::string_view> words = whitespace_split("one two three\n");
    REQUIRE(words.size() == 3);
    CHECK(words[0] == "one");
    CHECK(words[2] == "three");
    CHECK(whitespace_split("   ").empty());
    CHECK(whitespace_split("").empty());
}

TEST_CASE("word_tokenize lowercases letter runs and drops punctuation") {
    std::vector<std::string> words = word_tokenize("Hello, World! it's 42 degrees");
    REQUIRE(words.size() == 5);
    CHECK(words[0] == "hello");
    CHECK(words[1] == "world");
    CHECK(words[2] == "it");
    CHECK(words[3] == "s");
    CHECK(words[4] == "degrees");
    std::vector<std::string> accents = word_tokenize("Caf\xc3\xa9 TIME");
    REQUIRE(accents.size() == 2);
    CHECK(accents[0] == "caf\xc3\xa9");
    CHECK(accents[1] == "time");
}

TEST_CASE("split_lines drops nothing and skips trailing empty") {
    std::vector<std::string_view> lines = split_lines("a\nb\n");
    REQUIRE(lines.size() == 2);
    std::vector<std::string_view> lines2 = split_lines("a\n\nb");
    REQUIRE(lines2.size() == 3);
    CHECK(lines2[1].empty());
}

TEST_CASE("deterministic_shuffle is reproducible and seed-sensitive") {
    std::vector<int> a{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> b = a, c = a;
    deterministic_shuffle(a, 1);
    deterministic_shuffle(b, 1);
    deterministic_shuffle(c, 2);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("mulmod61 matches wide arithmetic") {
    SplitMix64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        uint64_t x = rng.next_below(kMersenne61);
        uint64_t y = rng.next_below(kMersenne61);
        __uint128_t expect = (static_cast<__uint128_t>(x) * y) % kMersenne61;
        CHECK(mulmod61(x, y) == static_cast<uint64_t>(expect));
    }
}
