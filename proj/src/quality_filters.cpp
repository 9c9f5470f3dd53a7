#include "curator/quality_filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "curator/text_util.hpp"

namespace curator {

std::string_view to_string(FilterStage s) {
    switch (s) {
        case FilterStage::url: return "url";
        case FilterStage::language: return "language";
        case FilterStage::gopher_quality: return "gopher_quality";
        case FilterStage::gopher_repetition: return "gopher_repetition";
        case FilterStage::c4: return "c4";
        case FilterStage::fineweb_custom: return "fineweb_custom";
        case FilterStage::score_gate: return "score_gate";
    }
    return "unknown";
}

namespace {

constexpr std::array<std::string_view, 8> kStopWords{"the", "be",   "to",   "of",
                                                     "and", "that", "have", "with"};

constexpr std::array<std::string_view, 5> kPolicyPhrases{
    "terms of use", "privacy policy", "cookie policy", "uses cookies", "use of cookies"};

bool is_line_end_punct(char32_t cp) {
    return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'"' || cp == U'\'';
}

bool is_c4_terminal_punct(char32_t cp) {
    return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'"';
}

bool is_bullet_start(char32_t cp) {
    return cp == 0x2022 || cp == 0x2023 || cp == 0x25E6 || cp == U'-' || cp == U'*';
}

char32_t first_codepoint(std::string_view s) {
    size_t pos = 0;
    return decode_utf8(s, pos);
}

char32_t last_codepoint(std::string_view s) {
    size_t pos = 0;
    char32_t cp = 0;
    while (pos < s.size()) cp = decode_utf8(s, pos);
    return cp;
}

// token with non-letter codepoints stripped from both ends, lowercased
std::string strip_word(std::string_view word) {
    std::u32string cps = decode_utf8_replace(word);
    size_t b = 0, e = cps.size();
    while (b < e && !is_unicode_letter(cps[b])) ++b;
    while (e > b && !is_unicode_letter(cps[e - 1])) --e;
    std::string out;
    for (size_t i = b; i < e; ++i) append_utf8(out, to_lower(cps[i]));
    return out;
}

// non-overlapping "..." occurrences plus single-char ellipses
int64_t count_ellipses(std::string_view text) {
    int64_t count = 0;
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "...") == 0) {
            ++count;
            i += 3;
        } else if (text.compare(i, 3, "…") == 0) {
            ++count;
            i += 3;
        } else {
            ++i;
        }
    }
    return count;
}

bool ends_with_ellipsis(std::string_view line) {
    return line.ends_with("...") || line.ends_with("…");
}

std::vector<std::string_view> split_paragraphs(std::string_view text) {
    std::vector<std::string_view> paras;
    size_t start = 0;
    while (start < text.size()) {
        size_t sep = text.find("\n\n", start);
        std::string_view block =
            sep == std::string_view::npos ? text.substr(start) : text.substr(start, sep - start);
        std::string_view t = trim(block);
        if (!t.empty()) paras.push_back(t);
        if (sep == std::string_view::npos) break;
        start = sep + 2;
        while (start < text.size() && text[start] == '\n') ++start;
    }
    return paras;
}

std::string join_ngram(const std::vector<std::string_view>& words, size_t i, int n) {
    std::string g;
    for (int k = 0; k < n; ++k) {
        if (k) g.push_back(' ');
        g.append(words[i + k]);
    }
    return g;
}

} // namespace

int64_t count_sentences(std::string_view text) {
    int64_t count = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 == text.size()) {
            ++count;
            continue;
        }
        char next = text[i + 1];
        if (next == ' ' || next == '\t' || next == '\n' || next == '\r') ++count;
    }
    return count;
}

DocumentMetrics compute_metrics(std::string_view text, int short_line_len) {
    DocumentMetrics m;
    for (int n = 2; n <= 4; ++n) m.top_ngram_char_fraction[n] = 0.0;
    for (int n = 5; n <= 10; ++n) m.duplicated_ngram_char_fraction[n] = 0.0;

    std::vector<std::string_view> lines;
    for (std::string_view l : split_lines(text))
        if (!l.empty()) lines.push_back(l);
    std::vector<std::string_view> words = whitespace_split(text);

    m.word_count = static_cast<int64_t>(words.size());
    m.line_count = static_cast<int64_t>(lines.size());

    // word statistics
    std::vector<int64_t> word_chars(words.size());
    int64_t total_word_chars = 0;
    int64_t alpha_words = 0;
    for (size_t i = 0; i < words.size(); ++i) {
        word_chars[i] = static_cast<int64_t>(codepoint_count(words[i]));
        total_word_chars += word_chars[i];
        size_t pos = 0;
        bool alpha = false;
        while (pos < words[i].size()) {
            if (is_unicode_letter(decode_utf8(words[i], pos))) {
                alpha = true;
                break;
            }
        }
        if (alpha) ++alpha_words;
        std::string stripped = strip_word(words[i]);
        for (std::string_view sw : kStopWords)
            if (stripped == sw) {
                ++m.stop_word_hits;
                break;
            }
    }
    if (m.word_count > 0) {
        m.mean_word_length =
            static_cast<double>(total_word_chars) / static_cast<double>(m.word_count);
        int64_t symbols = static_cast<int64_t>(std::count(text.begin(), text.end(), '#')) +
                          count_ellipses(text);
        m.symbol_to_word_ratio =
            static_cast<double>(symbols) / static_cast<double>(m.word_count);
        m.alpha_word_fraction =
            static_cast<double>(alpha_words) / static_cast<double>(m.word_count);
    }

    // line statistics
    int64_t bullet_lines = 0, ellipsis_lines = 0, punct_lines = 0, short_lines = 0;
    int64_t few_word_lines = 0, total_line_chars = 0, total_line_words = 0;
    int64_t dup_lines = 0, dup_line_chars = 0;
    std::unordered_map<std::string_view, int> line_seen;
    for (std::string_view line : lines) {
        int64_t len = static_cast<int64_t>(codepoint_count(line));
        total_line_chars += len;
        std::string_view t = trim(line);
        if (!t.empty() && is_bullet_start(first_codepoint(t))) ++bullet_lines;
        if (ends_with_ellipsis(t)) ++ellipsis_lines;
        if (is_line_end_punct(last_codepoint(line))) ++punct_lines;
        if (len < short_line_len) ++short_lines;
        int64_t line_words = static_cast<int64_t>(whitespace_split(line).size());
        total_line_words += line_words;
        if (line_words <= 3) ++few_word_lines;
        if (++line_seen[line] > 1) {
            ++dup_lines;
            dup_line_chars += len;
        }
    }
    if (m.line_count > 0) {
        double lc = static_cast<double>(m.line_count);
        m.bullet_line_fraction = static_cast<double>(bullet_lines) / lc;
        m.ellipsis_line_fraction = static_cast<double>(ellipsis_lines) / lc;
        m.lines_end_punct_fraction = static_cast<double>(punct_lines) / lc;
        m.lines_shorter_30_fraction = static_cast<double>(short_lines) / lc;
        m.line_with_most_3_words_fraction = static_cast<double>(few_word_lines) / lc;
        m.avg_words_per_line = static_cast<double>(total_line_words) / lc;
        m.avg_line_length = static_cast<double>(total_line_chars) / lc;
        m.duplicate_line_fraction = static_cast<double>(dup_lines) / lc;
        if (total_line_chars > 0)
            m.duplicate_line_char_fraction =
                static_cast<double>(dup_line_chars) / static_cast<double>(total_line_chars);
    }

    // paragraph statistics
    std::vector<std::string_view> paras = split_paragraphs(text);
    if (!paras.empty()) {
        int64_t dup_paras = 0, dup_para_chars = 0, total_para_chars = 0;
        std::unordered_map<std::string_view, int> para_seen;
        for (std::string_view p : paras) {
            int64_t len = static_cast<int64_t>(codepoint_count(p));
            total_para_chars += len;
            if (++para_seen[p] > 1) {
                ++dup_paras;
                dup_para_chars += len;
            }
        }
        m.duplicate_paragraph_fraction =
            static_cast<double>(dup_paras) / static_cast<double>(paras.size());
        if (total_para_chars > 0)
            m.duplicate_paragraph_char_fraction =
                static_cast<double>(dup_para_chars) / static_cast<double>(total_para_chars);
    }

    // word n-gram statistics
    if (total_word_chars > 0) {
        for (int n = 2; n <= 4; ++n) {
            if (m.word_count < n) break;
            std::unordered_map<std::string, int> counts;
            for (size_t i = 0; i + n <= words.size(); ++i) ++counts[join_ngram(words, i, n)];
            const std::string* top = nullptr;
            int top_count = 0;
            for (const auto& [gram, count] : counts) {
                if (count > top_count || (count == top_count && (!top || gram < *top))) {
                    top = &gram;
                    top_count = count;
                }
            }
            if (top_count <= 1) continue;
            std::vector<bool> covered(words.size(), false);
            for (size_t i = 0; i + n <= words.size(); ++i)
                if (join_ngram(words, i, n) == *top)
                    for (int k = 0; k < n; ++k) covered[i + k] = true;
            int64_t covered_chars = 0;
            for (size_t i = 0; i < words.size(); ++i)
                if (covered[i]) covered_chars += word_chars[i];
            m.top_ngram_char_fraction[n] =
                static_cast<double>(covered_chars) / static_cast<double>(total_word_chars);
        }

        for (int n = 5; n <= 10; ++n) {
            if (m.word_count < n) break;
            std::unordered_map<std::string, bool> seen;
            int64_t covered_chars = 0;
            size_t i = 0;
            while (i + n <= words.size()) {
                std::string gram = join_ngram(words, i, n);
                if (seen.count(gram)) {
                    for (int k = 0; k < n; ++k) covered_chars += word_chars[i + k];
                    i += n;
                } else {
                    seen.emplace(std::move(gram), true);
                    i += 1;
                }
            }
            m.duplicated_ngram_char_fraction[n] =
                static_cast<double>(covered_chars) / static_cast<double>(total_word_chars);
        }
    }

    return m;
}

FilterDecision gopher_quality(const DocumentMetrics& m, const FilterConfig& cfg) {
    FilterDecision d;
    d.stage = FilterStage::gopher_quality;
    auto drop = [&](const char* rule, double value) {
        d.keep = false;
        d.rule_id = rule;
        d.triggering_value = value;
        return d;
    };

    if (m.word_count < cfg.gopher_min_words)
        return drop("min_words", static_cast<double>(m.word_count));
    if (m.word_count > cfg.gopher_max_words)
        return drop("max_words", static_cast<double>(m.word_count));
    if (m.mean_word_length < cfg.gopher_mean_word_len_min ||
        m.mean_word_length > cfg.gopher_mean_word_len_max)
        return drop("mean_word_len", m.mean_word_length);
    if (m.symbol_to_word_ratio > cfg.gopher_symbol_word_ratio_max)
        return drop("symbol_word_ratio", m.symbol_to_word_ratio);
    if (m.bullet_line_fraction > cfg.gopher_bullet_frac_max)
        return drop("bullet_lines", m.bullet_line_fraction);
    if (m.ellipsis_line_fraction > cfg.gopher_ellipsis_frac_max)
        return drop("ellipsis_lines", m.ellipsis_line_fraction);
    if (m.alpha_word_fraction < cfg.gopher_alpha_word_frac_min)
        return drop("alpha_word_fraction", m.alpha_word_fraction);
    if (m.stop_word_hits < cfg.gopher_stop_word_min)
        return drop("stop_words", static_cast<double>(m.stop_word_hits));
    return d;
}

FilterDecision gopher_repetition(const DocumentMetrics& m, const FilterConfig& cfg) {
    FilterDecision d;
    d.stage = FilterStage::gopher_repetition;
    auto drop = [&](const std::string& rule, double value) {
        d.keep = false;
        d.rule_id = rule;
        d.triggering_value = value;
        return d;
    };

    if (m.duplicate_line_fraction >= cfg.gopher_dup_line_frac_max)
        return drop("dup_line_fraction", m.duplicate_line_fraction);
    if (m.duplicate_paragraph_fraction >= cfg.gopher_dup_para_frac_max)
        return drop("dup_paragraph_fraction", m.duplicate_paragraph_fraction);
    if (m.duplicate_line_char_fraction >= cfg.gopher_dup_line_char_frac_max)
        return drop("dup_line_char_fraction", m.duplicate_line_char_fraction);
    if (m.duplicate_paragraph_char_fraction >= cfg.gopher_dup_para_char_frac_max)
        return drop("dup_paragraph_char_fraction", m.duplicate_paragraph_char_fraction);
    for (const auto& [n, max] : cfg.gopher_top_ngram_max) {
        auto it = m.top_ngram_char_fraction.find(n);
        double v = it == m.top_ngram_char_fraction.end() ? 0.0 : it->second;
        if (v >= max) return drop("top_" + std::to_string(n) + "gram_char", v);
    }
    for (const auto& [n, max] : cfg.gopher_dup_ngram_max) {
        auto it = m.duplicated_ngram_char_fraction.find(n);
        double v = it == m.duplicated_ngram_char_fraction.end() ? 0.0 : it->second;
        if (v >= max) return drop("dup_" + std::to_string(n) + "gram_char", v);
    }
    return d;
}

C4LineResult c4_line_rules(std::string_view text, const FilterConfig& cfg) {
    C4LineResult result;
    result.decision.stage = FilterStage::c4;

    std::string kept;
    bool first = true;
    for (std::string_view line : split_lines(text)) {
        bool remove = false;
        if (!line.empty()) {
            std::vector<std::string> tokens = word_tokenize(line);
            for (const std::string& t : tokens)
                if (t == "javascript") {
                    remove = true;
                    break;
                }
            if (!remove)
                for (std::string_view phrase : kPolicyPhrases)
                    if (contains_ci(line, phrase)) {
                        remove = true;
                        break;
                    }
            if (!remove && cfg.c4_terminal_punct_enabled &&
                !is_c4_terminal_punct(last_codepoint(trim(line))))
                remove = true;
        }
        if (remove) {
            ++result.removed_line_count;
            continue;
        }
        if (!first) kept.push_back('\n');
        kept.append(line);
        first = false;
    }
    result.kept_text = std::move(kept);

    int64_t sentences = count_sentences(result.kept_text);
    if (sentences < cfg.c4_min_sentences) {
        result.decision.keep = false;
        result.decision.rule_id = "min_sentences";
        result.decision.triggering_value = static_cast<double>(sentences);
    }
    return result;
}

FilterDecision c4_doc_rules(std::string_view text, const DocumentMetrics& m,
                            const FilterConfig& cfg) {
    FilterDecision d;
    d.stage = FilterStage::c4;
    auto drop = [&](const char* rule, double value) {
        d.keep = false;
        d.rule_id = rule;
        d.triggering_value = value;
        return d;
    };

    if (contains_ci(text, "lorem ipsum")) return drop("lorem_ipsum", 1.0);
    if (text.find('{') != std::string_view::npos) return drop("curly_bracket", 1.0);
    if (cfg.c4_word_lengths_line_variant) {
        for (std::string_view line : split_lines(text)) {
            if (line.empty()) continue;
            int64_t words = static_cast<int64_t>(whitespace_split(line).size());
            if (words < cfg.c4_min_words_per_line)
                return drop("word_lengths", static_cast<double>(words));
        }
    }
    (void)m;
    return d;
}

FilterDecision fineweb_custom(const DocumentMetrics& m, const FilterConfig& cfg,
                              bool sampled_subset_member) {
    FilterDecision d;
    d.stage = FilterStage::fineweb_custom;
    auto drop = [&](const char* rule, double value) {
        d.keep = false;
        d.rule_id = rule;
        d.triggering_value = value;
        return d;
    };

    if (m.lines_end_punct_fraction <= cfg.punct_line_max)
        return drop("punct_line_ratio", m.lines_end_punct_fraction);
    if (m.duplicate_line_char_fraction >= cfg.dup_line_char_max)
        return drop("dup_line_char_ratio", m.duplicate_line_char_fraction);
    if (m.lines_shorter_30_fraction >= cfg.short_line_max)
        return drop("short_line_ratio", m.lines_shorter_30_fraction);

    if (cfg.opt_avg_words_per_line_enabled && m.avg_words_per_line < cfg.opt_avg_words_per_line_min)
        return drop("avg_words_per_line", m.avg_words_per_line);
    if (cfg.opt_avg_line_length_enabled && m.avg_line_length < cfg.opt_avg_line_length_min)
        return drop("avg_line_length", m.avg_line_length);
    if (cfg.opt_short_word_lines_enabled &&
        m.line_with_most_3_words_fraction > cfg.opt_line_most_3_words_max)
        return drop("line_with_most_3_words", m.line_with_most_3_words_fraction);
    if (cfg.opt_avg_line_length_sampled_enabled && sampled_subset_member &&
        m.avg_line_length < cfg.opt_avg_line_length_sampled_min)
        return drop("avg_line_length_sampled", m.avg_line_length);
    return d;
}

std::string url_host(std::string_view url) {
    std::string lowered = ascii_lower(url);
    std::string_view v = lowered;
    size_t scheme = v.find("://");
    if (scheme != std::string_view::npos) v = v.substr(scheme + 3);
    size_t end = v.find_first_of("/?#");
    if (end != std::string_view::npos) v = v.substr(0, end);
    size_t at = v.rfind('@');
    if (at != std::string_view::npos) v = v.substr(at + 1);
    size_t port = v.find(':');
    if (port != std::string_view::npos) v = v.substr(0, port);
    return std::string(v);
}

UrlBlocklist UrlBlocklist::parse(std::istream& in) {
    UrlBlocklist bl;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view v = trim(line);
        if (v.empty() || v[0] == '#') continue;
        if (v.starts_with("domain:")) bl.add_domain(trim(v.substr(7)));
        else if (v.starts_with("pattern:")) bl.add_pattern(trim(v.substr(8)));
        else throw std::runtime_error("blocklist line needs a domain: or pattern: prefix: " + line);
    }
    return bl;
}

void UrlBlocklist::add_domain(std::string_view domain) {
    domains_.insert(ascii_lower(domain));
}

void UrlBlocklist::add_pattern(std::string_view pattern) {
    patterns_.push_back(ascii_lower(pattern));
}

FilterDecision UrlBlocklist::check(std::string_view url) const {
    FilterDecision d;
    d.stage = FilterStage::url;

    std::string host = url_host(url);
    std::string_view part = host;
    while (!part.empty()) {
        if (domains_.count(std::string(part))) {
            d.keep = false;
            d.rule_id = "domain_blocklist";
            return d;
        }
        size_t dot = part.find('.');
        if (dot == std::string_view::npos) break;
        part = part.substr(dot + 1);
    }

    std::string lowered = ascii_lower(url);
    for (const std::string& p : patterns_) {
        if (lowered.find(p) != std::string::npos) {
            d.keep = false;
            d.rule_id = "pattern_blocklist";
            return d;
        }
    }
    return d;
}

namespace {

std::string format_double(double v) {
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return "0";
}

struct ConfigField {
    const char* key;
    const char* provenance;
    std::function<std::string(const FilterConfig&)> get;
    std::function<void(FilterConfig&, const std::string&)> set;
};

std::vector<ConfigField> config_fields() {
    auto dbl = [](double FilterConfig::*member, const char* key, const char* prov) {
        return ConfigField{key, prov,
                           [member](const FilterConfig& c) { return format_double(c.*member); },
                           [member](FilterConfig& c, const std::string& s) {
                               c.*member = std::stod(s);
                           }};
    };
    auto integer = [](int FilterConfig::*member, const char* key, const char* prov) {
        return ConfigField{key, prov,
                           [member](const FilterConfig& c) { return std::to_string(c.*member); },
                           [member](FilterConfig& c, const std::string& s) {
                               c.*member = std::stoi(s);
                           }};
    };
    auto boolean = [](bool FilterConfig::*member, const char* key, const char* prov) {
        return ConfigField{key, prov,
                           [member](const FilterConfig& c) { return c.*member ? "true" : "false"; },
                           [member](FilterConfig& c, const std::string& s) {
                               if (s == "true") c.*member = true;
                               else if (s == "false") c.*member = false;
                               else throw std::runtime_error("bad bool: " + s);
                           }};
    };
    auto map_entry = [](std::map<int, double> FilterConfig::*member, int n, const char* key,
                        const char* prov) {
        return ConfigField{key, prov,
                           [member, n](const FilterConfig& c) {
                               return format_double((c.*member).at(n));
                           },
                           [member, n](FilterConfig& c, const std::string& s) {
                               (c.*member)[n] = std::stod(s);
                           }};
    };

    std::vector<ConfigField> fields;
    fields.push_back(dbl(&FilterConfig::lang_threshold, "language.threshold", "paper"));
    fields.push_back(boolean(&FilterConfig::lang_argmax_only, "language.argmax_only", "paper"));
    fields.push_back(dbl(&FilterConfig::punct_line_max, "custom.punct_line_max", "paper"));
    fields.push_back(dbl(&FilterConfig::dup_line_char_max, "custom.dup_line_char_max", "paper"));
    fields.push_back(dbl(&FilterConfig::short_line_max, "custom.short_line_max", "paper"));
    fields.push_back(integer(&FilterConfig::short_line_len, "custom.short_line_len", "paper"));
    fields.push_back(
        integer(&FilterConfig::c4_min_words_per_line, "c4.min_words_per_line", "c4-default"));
    fields.push_back(integer(&FilterConfig::c4_min_sentences, "c4.min_sentences", "c4-default"));
    fields.push_back(boolean(&FilterConfig::c4_terminal_punct_enabled,
                             "c4.terminal_punct_enabled", "paper"));
    fields.push_back(boolean(&FilterConfig::c4_word_lengths_line_variant,
                             "c4.word_lengths_line_variant", "invented"));
    fields.push_back(integer(&FilterConfig::gopher_min_words, "gopher.min_words", "gopher-default"));
    fields.push_back(integer(&FilterConfig::gopher_max_words, "gopher.max_words", "gopher-default"));
    fields.push_back(
        dbl(&FilterConfig::gopher_mean_word_len_min, "gopher.mean_word_len_min", "gopher-default"));
    fields.push_back(
        dbl(&FilterConfig::gopher_mean_word_len_max, "gopher.mean_word_len_max", "gopher-default"));
    fields.push_back(dbl(&FilterConfig::gopher_symbol_word_ratio_max, "gopher.symbol_word_ratio_max",
                         "gopher-default"));
    fields.push_back(
        dbl(&FilterConfig::gopher_bullet_frac_max, "gopher.bullet_frac_max", "gopher-default"));
    fields.push_back(
        dbl(&FilterConfig::gopher_ellipsis_frac_max, "gopher.ellipsis_frac_max", "gopher-default"));
    fields.push_back(dbl(&FilterConfig::gopher_alpha_word_frac_min, "gopher.alpha_word_frac_min",
                         "gopher-default"));
    fields.push_back(
        integer(&FilterConfig::gopher_stop_word_min, "gopher.stop_word_min", "gopher-default"));
    fields.push_back(
        dbl(&FilterConfig::gopher_dup_line_frac_max, "gopher.dup_line_frac_max", "gopher-default"));
    fields.push_back(
        dbl(&FilterConfig::gopher_dup_para_frac_max, "gopher.dup_para_frac_max", "gopher-default"));
    fields.push_back(dbl(&FilterConfig::gopher_dup_line_char_frac_max,
                         "gopher.dup_line_char_frac_max", "paper"));
    fields.push_back(dbl(&FilterConfig::gopher_dup_para_char_frac_max,
                         "gopher.dup_para_char_frac_max", "gopher-default"));
    for (int n = 2; n <= 4; ++n)
        fields.push_back(map_entry(&FilterConfig::gopher_top_ngram_max, n,
                                   n == 2   ? "gopher.top_ngram_max.2"
                                   : n == 3 ? "gopher.top_ngram_max.3"
                                            : "gopher.top_ngram_max.4",
                                   "gopher-default"));
    for (int n = 5; n <= 10; ++n) {
        static const char* keys[] = {"gopher.dup_ngram_max.5", "gopher.dup_ngram_max.6",
                                     "gopher.dup_ngram_max.7", "gopher.dup_ngram_max.8",
                                     "gopher.dup_ngram_max.9", "gopher.dup_ngram_max.10"};
        fields.push_back(
            map_entry(&FilterConfig::gopher_dup_ngram_max, n, keys[n - 5], "gopher-default"));
    }
    fields.push_back(boolean(&FilterConfig::opt_avg_words_per_line_enabled,
                             "optional.avg_words_per_line_enabled", "invented"));
    fields.push_back(dbl(&FilterConfig::opt_avg_words_per_line_min,
                         "optional.avg_words_per_line_min", "paper"));
    fields.push_back(boolean(&FilterConfig::opt_avg_line_length_enabled,
                             "optional.avg_line_length_enabled", "invented"));
    fields.push_back(
        dbl(&FilterConfig::opt_avg_line_length_min, "optional.avg_line_length_min", "paper"));
    fields.push_back(boolean(&FilterConfig::opt_short_word_lines_enabled,
                             "optional.short_word_lines_enabled", "invented"));
    fields.push_back(dbl(&FilterConfig::opt_line_most_3_words_max,
                         "optional.line_most_3_words_max", "paper"));
    fields.push_back(boolean(&FilterConfig::opt_avg_line_length_sampled_enabled,
                             "optional.avg_line_length_sampled_enabled", "invented"));
    fields.push_back(dbl(&FilterConfig::opt_avg_line_length_sampled_min,
                         "optional.avg_line_length_sampled_min", "paper"));
    return fields;
}

} // namespace

void FilterConfig::save(std::ostream& out) const {
    for (const ConfigField& f : config_fields())
        out << f.key << " = " << f.get(*this) << "  # " << f.provenance << "\n";
}

FilterConfig FilterConfig::load(std::istream& in) {
    FilterConfig cfg;
    std::unordered_map<std::string, const ConfigField*> by_key;
    static const std::vector<ConfigField> fields = config_fields();
    for (const ConfigField& f : fields) by_key[f.key] = &f;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = trim(line);
        if (v.empty() || v[0] == '#') continue;
        size_t hash = v.find('#');
        if (hash != std::string_view::npos) v = trim(v.substr(0, hash));
        size_t eq = v.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": missing '='");
        std::string key(trim(v.substr(0, eq)));
        std::string value(trim(v.substr(eq + 1)));
        auto it = by_key.find(key);
        if (it == by_key.end())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
        it->second->set(cfg, value);
    }
    return cfg;
}

} // namespace curator
