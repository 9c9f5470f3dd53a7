#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace curator {

enum class ExtractionMode { heuristic_warc, wet_passthrough };

struct ExtractedText {
    std::string text;          // normalized, no tags, no 3+ newline runs
    int line_count = 0;        // nonempty lines
    ExtractionMode mode = ExtractionMode::heuristic_warc;
};

struct ExtractOptions {
    double max_link_density = 0.5;
    size_t min_line_chars = 10; // codepoints; shorter lines kept only at paragraph ends
    size_t min_lines = 1;       // pages with fewer surviving lines are rejected
};

// Main-content extraction from an HTML payload: tolerant tag tokenizer,
// script/style/comment removal, nav/header/footer/aside/form subtree
// rejection, block segmentation into lines, then a link-density and
// short-line filter. Returns nullopt when the payload is not HTML or fewer
// than min_lines survive; reject_reason (when non-null) is set to
// "not_html", "empty" or "too_few_lines".
std::optional<ExtractedText> extract_main_text(std::string_view html_bytes,
                                               std::optional<std::string_view> declared_charset = {},
                                               const ExtractOptions& opts = {},
                                               std::string* reject_reason = nullptr);

// Decodes &name;, &#nnn; and &#xhh; forms (HTML4 named set).
std::string decode_entities(std::string_view text);

// Payload decoding used by the extractor: honors utf-8 / latin-1 /
// windows-1252 / ascii declarations, anything else falls back to UTF-8 with
// replacement.
std::string decode_charset(std::string_view bytes, std::string_view charset);

} // namespace curator
