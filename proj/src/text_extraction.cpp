#include "curator/text_extraction.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "curator/text_util.hpp"

namespace curator {

namespace {

struct EntityDef {
    const char* name;
    uint32_t codepoint;
};

constexpr EntityDef kEntities[] = {
#include "entities.inc"
};

const std::unordered_map<std::string_view, char32_t>& entity_table() {
    static const std::unordered_map<std::string_view, char32_t> table = [] {
        std::unordered_map<std::string_view, char32_t> t;
        for (const auto& e : kEntities) t.emplace(e.name, static_cast<char32_t>(e.codepoint));
        return t;
    }();
    return table;
}

// 0x80-0x9F of windows-1252; zero means unmapped (becomes U+FFFD).
constexpr std::array<uint16_t, 32> kCp1252High{
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

std::string normalize_charset_name(std::string_view cs) {
    std::string out;
    for (char c : cs) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
    }
    return out;
}

const std::unordered_set<std::string>& skip_elements() {
    static const std::unordered_set<std::string> s{"nav",  "header", "footer",   "aside",
                                                   "form", "script", "style",    "noscript",
                                                   "head", "iframe", "svg",      "select",
                                                   "button"};
    return s;
}

const std::unordered_set<std::string>& block_elements() {
    static const std::unordered_set<std::string> s{
        "p",       "div",     "li",      "ul",    "ol",      "h1",   "h2",     "h3",
        "h4",      "h5",      "h6",      "table", "tr",      "td",   "th",     "blockquote",
        "pre",     "section", "article", "main",  "figure",  "dl",   "dt",     "dd",
        "hr",      "address", "center",  "body",  "html",    "tbody","thead",  "figcaption"};
    return s;
}

bool is_void_element(const std::string& name) {
    static const std::unordered_set<std::string> s{"br",   "hr",    "img",   "meta", "link",
                                                   "input", "area", "base",  "col",  "embed",
                                                   "source", "track", "wbr"};
    return s.count(name) > 0;
}

struct Line {
    std::string text;
    size_t total_chars = 0; // codepoints
    size_t link_chars = 0;
    bool ends_paragraph = false;
    int paragraph = 0;
};

class LineBuilder {
public:
    void append_char(char32_t cp, bool in_link) {
        if (is_unicode_space(cp)) {
            pending_space_ = !current_.empty();
            return;
        }
        if (pending_space_) {
            current_.push_back(' ');
            ++total_chars_;
            if (in_link) ++link_chars_; // spaces inside anchors count as link text
            pending_space_ = false;
        }
        append_utf8(current_, cp);
        ++total_chars_;
        if (in_link) ++link_chars_;
    }

    // hard=true marks a paragraph boundary (block open/close), false a <br>.
    void flush(bool hard) {
        if (!current_.empty()) {
            lines_.push_back(Line{current_, total_chars_, link_chars_, hard, paragraph_});
            current_.clear();
            total_chars_ = link_chars_ = 0;
            if (hard) ++paragraph_;
        } else if (hard && !lines_.empty()) {
            // block boundary right after a soft break still closes the paragraph
            if (!lines_.back().ends_paragraph) {
                lines_.back().ends_paragraph = true;
                ++paragraph_;
            }
        }
        pending_space_ = false;
    }

    std::vector<Line> take() {
        flush(true);
        return std::move(lines_);
    }

private:
    std::string current_;
    size_t total_chars_ = 0;
    size_t link_chars_ = 0;
    bool pending_space_ = false;
    int paragraph_ = 0;
    std::vector<Line> lines_;
};

std::string_view sniff_meta_charset(std::string_view bytes) {
    size_t limit = std::min(bytes.size(), static_cast<size_t>(1024));
    std::string_view head = bytes.substr(0, limit);
    for (size_t i = 0; i + 8 <= head.size(); ++i) {
        if (!starts_with_ci(head.substr(i), "charset")) continue;
        size_t p = i + 7;
        while (p < head.size() && (head[p] == ' ' || head[p] == '\t')) ++p;
        if (p >= head.size() || head[p] != '=') continue;
        ++p;
        while (p < head.size() && (head[p] == ' ' || head[p] == '"' || head[p] == '\'')) ++p;
        size_t start = p;
        while (p < head.size() && (std::isalnum(static_cast<unsigned char>(head[p])) ||
                                   head[p] == '-' || head[p] == '_'))
            ++p;
        if (p > start) return head.substr(start, p - start);
    }
    return {};
}

} // namespace

std::string decode_charset(std::string_view bytes, std::string_view charset) {
    std::string name = normalize_charset_name(charset);
    if (name == "iso88591" || name == "latin1" || name == "cp1252" || name == "windows1252") {
        std::string out;
        out.reserve(bytes.size());
        bool cp1252 = (name == "cp1252" || name == "windows1252");
        for (unsigned char c : bytes) {
            char32_t cp = c;
            if (cp1252 && c >= 0x80 && c <= 0x9F) {
                uint16_t mapped = kCp1252High[c - 0x80];
                cp = mapped ? mapped : kReplacementChar;
            }
            append_utf8(out, cp);
        }
        return out;
    }
    if (name == "usascii" || name == "ascii") {
        std::string out;
        out.reserve(bytes.size());
        for (unsigned char c : bytes) append_utf8(out, c < 0x80 ? c : kReplacementChar);
        return out;
    }
    // utf-8 and anything unrecognized: replacement decoding
    return encode_utf8(decode_utf8_replace(bytes));
}

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        size_t semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(text[i++]);
            continue;
        }
        std::string_view body = text.substr(i + 1, semi - i - 1);
        char32_t cp = 0;
        bool ok = false;
        if (body.size() >= 2 && body[0] == '#') {
            uint64_t value = 0;
            bool hex = body[1] == 'x' || body[1] == 'X';
            std::string_view digits = body.substr(hex ? 2 : 1);
            ok = !digits.empty();
            for (char c : digits) {
                int d;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                else { ok = false; break; }
                value = value * (hex ? 16 : 10) + static_cast<uint64_t>(d);
                if (value > 0x10FFFF) { ok = false; break; }
            }
            if (ok && value > 0 && !(value >= 0xD800 && value <= 0xDFFF))
                cp = static_cast<char32_t>(value);
            else
                ok = false;
        } else {
            auto it = entity_table().find(body);
            if (it != entity_table().end()) {
                cp = it->second;
                ok = true;
            }
        }
        if (ok) {
            append_utf8(out, cp);
            i = semi + 1;
        } else {
            out.push_back(text[i++]);
        }
    }
    return out;
}

std::optional<ExtractedText> extract_main_text(std::string_view html_bytes,
                                               std::optional<std::string_view> declared_charset,
                                               const ExtractOptions& opts,
                                               std::string* reject_reason) {
    auto reject = [&](const char* why) -> std::optional<ExtractedText> {
        if (reject_reason) *reject_reason = why;
        return std::nullopt;
    };

    std::string_view charset;
    if (declared_charset && !declared_charset->empty()) charset = *declared_charset;
    else charset = sniff_meta_charset(html_bytes);
    std::string html = decode_charset(html_bytes, charset.empty() ? "utf-8" : charset);
    if (html.empty()) return reject("empty");

    // HTML smell test: a '<' near the start or a doctype anywhere early.
    size_t probe = std::min(html.size(), static_cast<size_t>(1024));
    std::string_view head(html.data(), probe);
    if (head.find('<') == std::string_view::npos && !contains_ci(head, "<!doctype"))
        return reject("not_html");

    LineBuilder builder;
    std::map<std::string, int> skip_depth; // per skip-element open counts
    int skipping = 0;
    int anchor_depth = 0;

    auto enter = [&](const std::string& name) {
        if (skip_elements().count(name)) {
            ++skip_depth[name];
            ++skipping;
        }
    };
    auto leave = [&](const std::string& name) {
        if (skip_elements().count(name)) {
            auto it = skip_depth.find(name);
            if (it != skip_depth.end() && it->second > 0) {
                --it->second;
                --skipping;
            }
        }
    };

    size_t i = 0;
    const size_t n = html.size();
    std::string pending_text;
    auto flush_text = [&]() {
        if (pending_text.empty()) return;
        std::string decoded = decode_entities(pending_text);
        size_t pos = 0;
        while (pos < decoded.size()) {
            char32_t cp = decode_utf8(decoded, pos);
            builder.append_char(cp, anchor_depth > 0);
        }
        pending_text.clear();
    };

    while (i < n) {
        char c = html[i];
        if (c != '<') {
            if (skipping == 0) pending_text.push_back(c);
            ++i;
            continue;
        }
        // comment
        if (html.compare(i, 4, "<!--") == 0) {
            size_t end = html.find("-->", i + 4);
            i = (end == std::string::npos) ? n : end + 3;
            continue;
        }
        // doctype / processing instruction / bogus markup
        if (i + 1 < n && (html[i + 1] == '!' || html[i + 1] == '?')) {
            size_t end = html.find('>', i + 1);
            i = (end == std::string::npos) ? n : end + 1;
            continue;
        }
        bool closing = i + 1 < n && html[i + 1] == '/';
        size_t name_start = i + (closing ? 2 : 1);
        size_t p = name_start;
        while (p < n && (std::isalnum(static_cast<unsigned char>(html[p])) || html[p] == '-'))
            ++p;
        if (p == name_start) { // bare '<', keep as text
            if (skipping == 0) pending_text.push_back(c);
            ++i;
            continue;
        }
        std::string name = ascii_lower(std::string_view(html).substr(name_start, p - name_start));

        // advance past the tag, honoring quoted attribute values
        bool self_closing = false;
        char quote = 0;
        while (p < n) {
            char t = html[p];
            if (quote) {
                if (t == quote) quote = 0;
            } else if (t == '"' || t == '\'') {
                quote = t;
            } else if (t == '>') {
                self_closing = p > 0 && html[p - 1] == '/';
                ++p;
                break;
            }
            ++p;
        }
        i = p;

        // raw-text elements: swallow everything to the matching close tag
        if (!closing && (name == "script" || name == "style")) {
            std::string close = "</" + name;
            size_t at = i;
            size_t found = std::string::npos;
            while (at < n) {
                if (html[at] == '<' && starts_with_ci(std::string_view(html).substr(at), close)) {
                    found = at;
                    break;
                }
                ++at;
            }
            if (found == std::string::npos) { i = n; continue; }
            size_t gt = html.find('>', found);
            i = (gt == std::string::npos) ? n : gt + 1;
            continue;
        }

        bool block = block_elements().count(name) > 0 || name == "br" || name == "hr";
        if (block) {
            flush_text();
            builder.flush(name != "br");
        }
        if (name == "a") {
            flush_text();
            if (!closing) ++anchor_depth;
            else if (anchor_depth > 0) --anchor_depth;
            continue;
        }
        if (name == "body") {
            // tolerate pages that never close <head>
            auto it = skip_depth.find("head");
            if (it != skip_depth.end() && it->second > 0) {
                skipping -= it->second;
                it->second = 0;
            }
        }
        if (is_void_element(name) || self_closing) continue;
        if (closing) leave(name);
        else enter(name);
    }
    flush_text();

    std::vector<Line> lines = builder.take();
    std::string assembled;
    int last_paragraph = -1;
    size_t kept = 0;
    for (const Line& line : lines) {
        if (line.total_chars == 0) continue;
        double density = static_cast<double>(line.link_chars) / static_cast<double>(line.total_chars);
        if (density > opts.max_link_density) continue;
        if (line.total_chars < opts.min_line_chars && !line.ends_paragraph) continue;
        if (!assembled.empty())
            assembled.append(line.paragraph != last_paragraph ? "\n\n" : "\n");
        assembled.append(line.text);
        last_paragraph = line.paragraph;
        ++kept;
    }

    if (kept < opts.min_lines) return reject("too_few_lines");

    ExtractedText result;
    result.text = normalize_text(assembled);
    result.line_count = 0;
    for (std::string_view l : split_lines(result.text))
        if (!l.empty()) ++result.line_count;
    result.mode = ExtractionMode::heuristic_warc;
    return result;
}

} // namespace curator
