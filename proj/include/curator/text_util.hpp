#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curator {

constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes one UTF-8 sequence starting at `pos`; advances `pos` past it.
// Invalid sequences yield U+FFFD and advance by one byte.
char32_t decode_utf8(std::string_view s, size_t& pos);

void append_utf8(std::string& out, char32_t cp);

// Full decode with replacement of invalid sequences.
std::u32string decode_utf8_replace(std::string_view s);
std::string encode_utf8(const std::u32string& s);

// Number of codepoints (invalid bytes count as one replacement char each).
size_t codepoint_count(std::string_view s);

// Unicode whitespace as used for word splitting: ASCII space/tab/newlines,
// NEL, NBSP, ogham mark, the general punctuation spaces, line/para
// separators, narrow NBSP, math space, ideographic space.
bool is_unicode_space(char32_t cp);

// Letter test over explicit script ranges (Latin, Greek, Cyrillic, Armenian,
// Hebrew, Arabic, Devanagari and other Indic, Thai, CJK, Kana, Hangul, and
// the Latin extended blocks). Coarser than the full Unicode category but
// stable and dependency-free.
bool is_unicode_letter(char32_t cp);

bool is_ascii_digit(char32_t cp);

// Simple lowercase: ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic.
// Other scripts pass through unchanged.
char32_t to_lower(char32_t cp);

std::string ascii_lower(std::string_view s);

// Splits on '\n'. Does not include the newline; a trailing newline does not
// produce a final empty element.
std::vector<std::string_view> split_lines(std::string_view text);

// Nonempty maximal runs of non-whitespace, per is_unicode_space.
std::vector<std::string_view> whitespace_split(std::string_view text);

// Lowercased maximal runs of letters, per is_unicode_letter; punctuation and
// digits are dropped. Shared by dedup shingling and the bias audit.
std::vector<std::string> word_tokenize(std::string_view text);

// CRLF -> LF, strip trailing whitespace per line, collapse runs of 3+
// newlines to 2, then canonical composition (NFC over the embedded
// Latin/Greek/Cyrillic pair table).
std::string normalize_text(std::string_view text);

std::string_view trim(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);

} // namespace curator
