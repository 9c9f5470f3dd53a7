#include "curator/text_util.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <map>

namespace curator {

char32_t decode_utf8(std::string_view s, size_t& pos) {
    unsigned char c0 = static_cast<unsigned char>(s[pos]);
    if (c0 < 0x80) {
        pos += 1;
        return c0;
    }
    auto cont = [&](size_t i) {
        return i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
    };
    if ((c0 & 0xE0) == 0xC0 && cont(pos + 1)) {
        char32_t cp = ((c0 & 0x1Fu) << 6) | (static_cast<unsigned char>(s[pos + 1]) & 0x3Fu);
        if (cp >= 0x80) {
            pos += 2;
            return cp;
        }
    } else if ((c0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
        char32_t cp = ((c0 & 0x0Fu) << 12) | ((static_cast<unsigned char>(s[pos + 1]) & 0x3Fu) << 6) |
                      (static_cast<unsigned char>(s[pos + 2]) & 0x3Fu);
        if (cp >= 0x800 && !(cp >= 0xD800 && cp <= 0xDFFF)) {
            pos += 3;
            return cp;
        }
    } else if ((c0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        char32_t cp = ((c0 & 0x07u) << 18) | ((static_cast<unsigned char>(s[pos + 1]) & 0x3Fu) << 12) |
                      ((static_cast<unsigned char>(s[pos + 2]) & 0x3Fu) << 6) |
                      (static_cast<unsigned char>(s[pos + 3]) & 0x3Fu);
        if (cp >= 0x10000 && cp <= 0x10FFFF) {
            pos += 4;
            return cp;
        }
    }
    pos += 1;
    return kReplacementChar;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::u32string decode_utf8_replace(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    size_t pos = 0;
    while (pos < s.size()) out.push_back(decode_utf8(s, pos));
    return out;
}

std::string encode_utf8(const std::u32string& s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

size_t codepoint_count(std::string_view s) {
    size_t pos = 0, n = 0;
    while (pos < s.size()) {
        decode_utf8(s, pos);
        ++n;
    }
    return n;
}

bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r':
        case 0x0B: case 0x0C: case 0x85: case 0xA0:
        case 0x1680: case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

namespace {

struct Range {
    char32_t lo, hi;
};

// Letter ranges, coarse but covering the scripts seen in web crawls.
constexpr std::array<Range, 17> kLetterRanges{{
    {0x0041, 0x005A}, {0x0061, 0x007A},                     // ASCII
    {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x02AF},   // Latin-1 .. IPA (skips multiply/divide signs)
    {0x0370, 0x052F},                                       // Greek, Cyrillic
    {0x0531, 0x058F},                                       // Armenian
    {0x05D0, 0x05EA},                                       // Hebrew
    {0x0620, 0x064A}, {0x0660, 0x06FF},                     // Arabic
    {0x0900, 0x0DFF},                                       // Indic blocks
    {0x0E00, 0x0E5B},                                       // Thai
    {0x1E00, 0x1EFF},                                       // Latin Extended Additional
    {0x1F00, 0x1FFE},                                       // Greek Extended
    {0x3040, 0x30FF},                                       // Hiragana, Katakana
    {0x4E00, 0x9FFF},                                       // CJK unified
    {0xAC00, 0xD7A3},                                       // Hangul
}};

} // namespace

bool is_unicode_letter(char32_t cp) {
    for (const auto& r : kLetterRanges)
        if (cp >= r.lo && cp <= r.hi) return true;
    return false;
}

bool is_ascii_digit(char32_t cp) {
    return cp >= U'0' && cp <= U'9';
}

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;              // Latin-1
    if (cp >= 0x100 && cp <= 0x177 && (cp % 2) == 0) return cp + 1;          // Latin Ext-A even pairs
    if (cp >= 0x179 && cp <= 0x17E && (cp % 2) == 1) return cp + 1;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;           // Greek
    if (cp >= 0x410 && cp <= 0x42F) return cp + 32;                          // Cyrillic
    if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
    return cp;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 32;
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::vector<std::string_view> whitespace_split(std::string_view text) {
    std::vector<std::string_view> words;
    size_t pos = 0;
    size_t word_start = 0;
    bool in_word = false;
    while (pos < text.size()) {
        size_t cp_start = pos;
        char32_t cp = decode_utf8(text, pos);
        if (is_unicode_space(cp)) {
            if (in_word) {
                words.push_back(text.substr(word_start, cp_start - word_start));
                in_word = false;
            }
        } else if (!in_word) {
            word_start = cp_start;
            in_word = true;
        }
    }
    if (in_word) words.push_back(text.substr(word_start));
    return words;
}

std::vector<std::string> word_tokenize(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = decode_utf8(text, pos);
        if (is_unicode_letter(cp)) {
            append_utf8(current, to_lower(cp));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

namespace {

struct NfcPair {
    uint32_t starter, mark, composed;
};

constexpr NfcPair kNfcPairs[] = {
#include "nfc_pairs.inc"
};

const std::map<uint64_t, char32_t>& nfc_table() {
    static const std::map<uint64_t, char32_t> table = [] {
        std::map<uint64_t, char32_t> t;
        for (const auto& p : kNfcPairs)
            t[(static_cast<uint64_t>(p.starter) << 32) | p.mark] = static_cast<char32_t>(p.composed);
        return t;
    }();
    return table;
}

// Greedy left-to-right canonical composition over the pair table.
void compose_nfc(std::u32string& s) {
    size_t out = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (out > 0) {
            uint64_t key = (static_cast<uint64_t>(s[out - 1]) << 32) | s[i];
            auto it = nfc_table().find(key);
            if (it != nfc_table().end()) {
                s[out - 1] = it->second;
                continue;
            }
        }
        s[out++] = s[i];
    }
    s.resize(out);
}

} // namespace

std::string normalize_text(std::string_view text) {
    std::string tmp;
    tmp.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') continue;
            tmp.push_back('\n');
        } else {
            tmp.push_back(text[i]);
        }
    }

    std::string stripped;
    stripped.reserve(tmp.size());
    size_t line_start = 0;
    for (size_t i = 0; i <= tmp.size(); ++i) {
        if (i == tmp.size() || tmp[i] == '\n') {
            size_t end = i;
            while (end > line_start) {
                char c = tmp[end - 1];
                if (c == ' ' || c == '\t' || c == '\v' || c == '\f') --end;
                else break;
            }
            stripped.append(tmp, line_start, end - line_start);
            if (i < tmp.size()) stripped.push_back('\n');
            line_start = i + 1;
        }
    }

    std::string collapsed;
    collapsed.reserve(stripped.size());
    size_t run = 0;
    for (char c : stripped) {
        if (c == '\n') {
            if (++run <= 2) collapsed.push_back(c);
        } else {
            run = 0;
            collapsed.push_back(c);
        }
    }

    std::u32string cps = decode_utf8_replace(collapsed);
    compose_nfc(cps);
    return encode_utf8(cps);
}

std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return s.substr(b, e - b);
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
        char a = s[i], b = prefix[i];
        if (a >= 'A' && a <= 'Z') a += 32;
        if (b >= 'A' && b <= 'Z') b += 32;
        if (a != b) return false;
    }
    return true;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    if (haystack.size() < needle.size()) return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i)
        if (starts_with_ci(haystack.substr(i), needle)) return true;
    return false;
}

} // namespace curator
