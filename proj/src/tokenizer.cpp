#include "curator/tokenizer.hpp"

#include <stdexcept>
#include <vector>

#include "curator/text_util.hpp"

namespace curator {

TokenCounter TokenCounter::whitespace() {
    TokenCounter tc;
    tc.kind_ = TokenCounterKind::whitespace;
    return tc;
}

TokenCounter TokenCounter::bpe_from_merges(std::istream& in) {
    TokenCounter tc;
    tc.kind_ = TokenCounterKind::bpe;
    std::string line;
    int rank = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = trim(line);
        if (v.empty() || v[0] == '#') continue;
        size_t space = v.find(' ');
        if (space == std::string_view::npos || space == 0 || space + 1 >= v.size() ||
            v.find(' ', space + 1) != std::string_view::npos)
            throw std::runtime_error("merges line " + std::to_string(lineno) +
                                     ": expected two space-separated tokens");
        std::string key(v.substr(0, space));
        key.push_back('\x01');
        key.append(v.substr(space + 1));
        tc.merges_.emplace(std::move(key), rank++);
    }
    return tc;
}

int64_t TokenCounter::count_word_bpe(std::string_view word) const {
    // start from single bytes, then greedily apply the lowest-rank merge
    std::vector<std::string> units;
    units.reserve(word.size());
    for (char c : word) units.emplace_back(1, c);

    while (units.size() > 1) {
        int best_rank = INT32_MAX;
        size_t best_at = 0;
        for (size_t i = 0; i + 1 < units.size(); ++i) {
            std::string key = units[i];
            key.push_back('\x01');
            key.append(units[i + 1]);
            auto it = merges_.find(key);
            if (it != merges_.end() && it->second < best_rank) {
                best_rank = it->second;
                best_at = i;
            }
        }
        if (best_rank == INT32_MAX) break;
        units[best_at].append(units[best_at + 1]);
        units.erase(units.begin() + static_cast<long>(best_at) + 1);
    }
    return static_cast<int64_t>(units.size());
}

int64_t TokenCounter::count(std::string_view text) const {
    std::vector<std::string_view> words = whitespace_split(text);
    if (words.empty()) throw std::invalid_argument("cannot count tokens of empty text");
    if (kind_ == TokenCounterKind::whitespace) return static_cast<int64_t>(words.size());
    int64_t total = 0;
    for (std::string_view w : words) total += count_word_bpe(w);
    return total;
}

} // namespace curator
