#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace curator {

enum class TokenCounterKind { whitespace, bpe };

// Token counting for the datasheet token_count field and manifest tallies.
// whitespace mode counts whitespace-separated units; bpe mode runs greedy
// byte-pair merges from a generic merges file (one "left right" pair per
// line, rank = line order, '#' lines and blanks skipped).
class TokenCounter {
public:
    static TokenCounter whitespace();
    static TokenCounter bpe_from_merges(std::istream& in); // throws on malformed lines

    // Throws std::invalid_argument on empty text.
    int64_t count(std::string_view text) const;

    TokenCounterKind kind() const { return kind_; }
    size_t merge_count() const { return merges_.size(); }

private:
    TokenCounter() = default;
    int64_t count_word_bpe(std::string_view word) const;

    TokenCounterKind kind_ = TokenCounterKind::whitespace;
    std::unordered_map<std::string, int> merges_; // "left\x01right" -> rank
};

} // namespace curator
