#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace curator {

// Linear bag-of-character-n-grams classifier with hashed features.
// Immutable once trained; safe to share across threads.
struct LangModel {
    std::vector<std::string> labels;
    int ngram_min = 2;
    int ngram_max = 4;
    uint32_t hash_dim = 1u << 18;
    std::vector<double> weights; // labels x hash_dim, row-major
    std::vector<double> bias;    // per label
};

struct TrainOptions {
    int epochs = 20;
    double learning_rate = 0.5;
    uint64_t seed = 0;
    double holdout_fraction = 0.2;
    uint32_t hash_dim = 1u << 18;
};

struct TrainResult {
    LangModel model;
    double holdout_accuracy = 0.0;
    int skipped_empty = 0;
};

// Multinomial logistic regression over hashed character n-gram frequencies.
// Samples are canonically ordered before the seed-keyed shuffle, so the
// result does not depend on input order. Throws std::invalid_argument when
// fewer than two distinct labels are present.
TrainResult train_language_model(std::vector<std::pair<std::string, std::string>> labeled_texts,
                                 const TrainOptions& opts = {});

struct Classification {
    std::string label;
    double score = 0.0;
    std::vector<std::pair<std::string, double>> scores; // label -> probability
};

// Throws std::invalid_argument on empty / whitespace-only text.
Classification classify(const LangModel& model, std::string_view text);

// Inclusive gate on the classifier (or external) score.
inline bool passes_gate(double score, double threshold = 0.65) {
    return score >= threshold;
}

void save_model(const LangModel& model, std::ostream& out);
LangModel load_model(std::istream& in);

// Plain-text score file: "record_id<TAB>label<TAB>score" per line.
struct ExternalScore {
    std::string label;
    double score = 0.0;
};

std::unordered_map<std::string, ExternalScore> read_language_scores(std::istream& in);

} // namespace curator
