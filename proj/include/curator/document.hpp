#pragma once

#include <cstdint>
#include <string>

namespace curator {

// One curated document; the fields of the output row.
struct Document {
    std::string text;
    std::string id;
    std::string dump;
    std::string url;
    std::string date;
    std::string file_path;
    std::string language;
    double language_score = 0.0;
    int64_t token_count = 0;
};

} // namespace curator
