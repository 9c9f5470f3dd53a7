#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace curator {

// Per-document statistics consumed by every filter family.
//
// Conventions (shared with the brute-force test oracle):
//   - lines are the nonempty '\n'-separated lines of normalized text
//   - words are maximal runs of non-whitespace (Unicode whitespace)
//   - all character counts are codepoints
//   - paragraphs are blank-line separated blocks, trimmed, nonempty
//   - duplicate fractions count occurrences beyond the first of each
//     distinct line/paragraph
//   - top_ngram_char_fraction[n]: word characters covered by occurrences of
//     the most frequent word n-gram (lexicographically smallest on ties,
//     zero when it occurs once), over total word characters
//   - duplicated_ngram_char_fraction[n]: left-to-right scan; an n-gram seen
//     before marks its n word positions covered and jumps ahead n words, so
//     overlaps are never double counted
struct DocumentMetrics {
    int64_t word_count = 0;
    int64_t line_count = 0;
    double mean_word_length = 0.0;
    double symbol_to_word_ratio = 0.0; // '#' plus ellipsis occurrences per word
    double bullet_line_fraction = 0.0;
    double ellipsis_line_fraction = 0.0;
    double alpha_word_fraction = 0.0;
    int64_t stop_word_hits = 0;
    double duplicate_line_fraction = 0.0;
    double duplicate_line_char_fraction = 0.0;
    double duplicate_paragraph_fraction = 0.0;
    double duplicate_paragraph_char_fraction = 0.0;
    std::map<int, double> top_ngram_char_fraction;        // n = 2,3,4
    std::map<int, double> duplicated_ngram_char_fraction; // n = 5..10
    double lines_end_punct_fraction = 0.0;  // last char in {. ! ? " '}
    double lines_shorter_30_fraction = 0.0;
    double avg_words_per_line = 0.0;
    double avg_line_length = 0.0;
    double line_with_most_3_words_fraction = 0.0; // lines with <= 3 words
};

enum class FilterStage {
    url,
    language,
    gopher_quality,
    gopher_repetition,
    c4,
    fineweb_custom,
    score_gate,
};

std::string_view to_string(FilterStage s);

struct FilterDecision {
    bool keep = true;
    std::string rule_id;          // empty when keep
    double triggering_value = 0.0;
    FilterStage stage = FilterStage::gopher_quality;
};

// All rule thresholds. Provenance per field (paper / gopher-default /
// c4-default / invented) is emitted as a comment by save().
//
// Bound semantics, fixed and encoded in the boundary tests:
//   - quality bounds are violated strictly outside [min,max]: a document
//     exactly at a bound is kept
//   - repetition fractions drop at or above their maximum (inclusive)
//   - the three custom rules drop inclusively (<= 0.12, >= 0.1, >= 0.67)
//   - the language gate keeps at or above the threshold (inclusive)
struct FilterConfig {
    double lang_threshold = 0.65;
    bool lang_argmax_only = false; // keep any doc whose top label matches, ignore score

    // custom one-sided rules
    double punct_line_max = 0.12;
    double dup_line_char_max = 0.1;
    double short_line_max = 0.67;
    int short_line_len = 30;

    // c4
    int c4_min_words_per_line = 3;
    int c4_min_sentences = 5;
    bool c4_terminal_punct_enabled = false;
    bool c4_word_lengths_line_variant = false;

    // gopher quality
    int gopher_min_words = 50;
    int gopher_max_words = 100000;
    double gopher_mean_word_len_min = 3.0;
    double gopher_mean_word_len_max = 10.0;
    double gopher_symbol_word_ratio_max = 0.1;
    double gopher_bullet_frac_max = 0.9;
    double gopher_ellipsis_frac_max = 0.3;
    double gopher_alpha_word_frac_min = 0.8;
    int gopher_stop_word_min = 2;

    // gopher repetition
    double gopher_dup_line_frac_max = 0.3;
    double gopher_dup_para_frac_max = 0.3;
    double gopher_dup_line_char_frac_max = 0.2;
    double gopher_dup_para_char_frac_max = 0.2;
    std::map<int, double> gopher_top_ngram_max = {{2, 0.2}, {3, 0.18}, {4, 0.16}};
    std::map<int, double> gopher_dup_ngram_max = {
        {5, 0.15}, {6, 0.14}, {7, 0.13}, {8, 0.12}, {9, 0.11}, {10, 0.10}};

    // optional candidate rules, disabled by default
    bool opt_avg_words_per_line_enabled = false;
    double opt_avg_words_per_line_min = 7.0;
    bool opt_avg_line_length_enabled = false;
    double opt_avg_line_length_min = 56.0;
    bool opt_short_word_lines_enabled = false;
    double opt_line_most_3_words_max = 0.49;
    bool opt_avg_line_length_sampled_enabled = false;
    double opt_avg_line_length_sampled_min = 56.0;

    void save(std::ostream& out) const;
    static FilterConfig load(std::istream& in);
};

// One pass over lines and words; short_line_len bounds the short-line metric.
DocumentMetrics compute_metrics(std::string_view text, int short_line_len = 30);

// Terminal-punctuation sentence count: occurrences of . ! ? followed by
// whitespace or end of text.
int64_t count_sentences(std::string_view text);

FilterDecision gopher_quality(const DocumentMetrics& m, const FilterConfig& cfg);
FilterDecision gopher_repetition(const DocumentMetrics& m, const FilterConfig& cfg);

struct C4LineResult {
    std::string kept_text;
    int64_t removed_line_count = 0;
    FilterDecision decision;
};

// Removes javascript-token lines, policy-phrase lines and (when enabled)
// lines without terminal punctuation; drops the document when fewer than
// c4_min_sentences sentences remain.
C4LineResult c4_line_rules(std::string_view text, const FilterConfig& cfg);

FilterDecision c4_doc_rules(std::string_view text, const DocumentMetrics& m,
                            const FilterConfig& cfg);

// sampled_subset_member enables the 0.5-sampling variant for this document;
// membership is decided by the caller from the run seed.
FilterDecision fineweb_custom(const DocumentMetrics& m, const FilterConfig& cfg,
                              bool sampled_subset_member = false);

// Blocklist file: one entry per line, "domain:" or "pattern:" prefixed;
// '#' starts a comment.
class UrlBlocklist {
public:
    static UrlBlocklist parse(std::istream& in);

    void add_domain(std::string_view domain);
    void add_pattern(std::string_view pattern);

    size_t domain_count() const { return domains_.size(); }
    size_t pattern_count() const { return patterns_.size(); }

    // Drop when the registered domain or any parent domain is listed, or the
    // lowercased URL contains a listed pattern.
    FilterDecision check(std::string_view url) const;

private:
    std::unordered_set<std::string> domains_;
    std::vector<std::string> patterns_;
};

inline FilterDecision url_filter(std::string_view url, const UrlBlocklist& blocklist) {
    return blocklist.check(url);
}

// Host part of a URL, lowercased; empty when unparseable.
std::string url_host(std::string_view url);

} // namespace curator
