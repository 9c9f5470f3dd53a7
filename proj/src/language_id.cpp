#include "curator/language_id.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "curator/hashing.hpp"
#include "curator/text_util.hpp"

namespace curator {

namespace {

// Hashed character n-gram counts over lowercased bytes, normalized to
// frequencies. Multiply-shift bucketing of an FNV base hash.
std::vector<std::pair<uint32_t, double>> featurize(std::string_view text, int nmin, int nmax,
                                                   uint32_t dim) {
    std::string lowered = ascii_lower(text);
    std::unordered_map<uint32_t, double> counts;
    size_t total = 0;
    int shift = 64 - static_cast<int>(std::round(std::log2(static_cast<double>(dim))));
    for (int n = nmin; n <= nmax; ++n) {
        if (lowered.size() < static_cast<size_t>(n)) continue;
        for (size_t i = 0; i + n <= lowered.size(); ++i) {
            uint64_t h = fnv1a64(std::string_view(lowered).substr(i, n));
            h = mix64(h ^ (static_cast<uint64_t>(n) << 56));
            uint32_t idx = static_cast<uint32_t>((h * 0x9E3779B97F4A7C15ULL) >> shift);
            counts[idx & (dim - 1)] += 1.0;
            ++total;
        }
    }
    std::vector<std::pair<uint32_t, double>> features(counts.begin(), counts.end());
    std::sort(features.begin(), features.end());
    if (total > 0)
        for (auto& [idx, v] : features) v /= static_cast<double>(total);
    return features;
}

std::vector<double> softmax(std::vector<double> logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : logits) v /= sum;
    return logits;
}

std::vector<double> score_features(const LangModel& m,
                                   const std::vector<std::pair<uint32_t, double>>& feats) {
    std::vector<double> logits(m.labels.size());
    for (size_t k = 0; k < m.labels.size(); ++k) {
        double z = m.bias[k];
        const double* row = m.weights.data() + k * m.hash_dim;
        for (const auto& [idx, v] : feats) z += row[idx] * v;
        logits[k] = z;
    }
    return softmax(std::move(logits));
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("model file truncated");
    return v;
}

} // namespace

TrainResult train_language_model(std::vector<std::pair<std::string, std::string>> labeled_texts,
                                 const TrainOptions& opts) {
    TrainResult result;

    std::vector<std::pair<std::string, std::string>> samples;
    samples.reserve(labeled_texts.size());
    for (auto& [text, label] : labeled_texts) {
        if (trim(text).empty()) {
            ++result.skipped_empty;
            continue;
        }
        samples.emplace_back(std::move(text), std::move(label));
    }

    // canonical order first, so the seeded shuffle is the only order that matters
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });

    std::vector<std::string> labels;
    for (const auto& [text, label] : samples)
        if (labels.empty() || labels.back() != label) labels.push_back(label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.size() < 2) throw std::invalid_argument("need at least two distinct labels");

    deterministic_shuffle(samples, opts.seed);

    size_t holdout = static_cast<size_t>(static_cast<double>(samples.size()) * opts.holdout_fraction);
    size_t train_count = samples.size() - holdout;

    LangModel model;
    model.labels = labels;
    model.hash_dim = opts.hash_dim;
    model.weights.assign(labels.size() * static_cast<size_t>(opts.hash_dim), 0.0);
    model.bias.assign(labels.size(), 0.0);

    auto label_index = [&](const std::string& l) {
        return static_cast<size_t>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
    };

    std::vector<std::vector<std::pair<uint32_t, double>>> features(samples.size());
    std::vector<size_t> targets(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        features[i] = featurize(samples[i].first, model.ngram_min, model.ngram_max, model.hash_dim);
        targets[i] = label_index(samples[i].second);
    }

    std::vector<size_t> order(train_count);
    for (size_t i = 0; i < train_count; ++i) order[i] = i;

    size_t total_steps = std::max<size_t>(1, static_cast<size_t>(opts.epochs) * train_count);
    size_t step = 0;
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        deterministic_shuffle(order, opts.seed ^ mix64(static_cast<uint64_t>(epoch) + 1));
        for (size_t i : order) {
            double lr = opts.learning_rate *
                        (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
            ++step;
            std::vector<double> probs = score_features(model, features[i]);
            for (size_t k = 0; k < labels.size(); ++k) {
                double g = probs[k] - (k == targets[i] ? 1.0 : 0.0);
                if (g == 0.0) continue;
                double* row = model.weights.data() + k * model.hash_dim;
                for (const auto& [idx, v] : features[i]) row[idx] -= lr * g * v;
                model.bias[k] -= lr * g;
            }
        }
    }

    size_t correct = 0;
    for (size_t i = train_count; i < samples.size(); ++i) {
        std::vector<double> probs = score_features(model, features[i]);
        size_t best = static_cast<size_t>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
        if (best == targets[i]) ++correct;
    }
    result.holdout_accuracy =
        holdout == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(holdout);
    result.model = std::move(model);
    return result;
}

Classification classify(const LangModel& model, std::string_view text) {
    if (trim(text).empty()) throw std::invalid_argument("empty text");
    std::vector<std::pair<uint32_t, double>> feats =
        featurize(text, model.ngram_min, model.ngram_max, model.hash_dim);
    if (feats.empty()) throw std::invalid_argument("text too short to featurize");

    std::vector<double> probs = score_features(model, feats);
    Classification out;
    size_t best = 0;
    for (size_t k = 0; k < model.labels.size(); ++k) {
        out.scores.emplace_back(model.labels[k], probs[k]);
        if (probs[k] > probs[best]) best = k;
    }
    out.label = model.labels[best];
    out.score = probs[best];
    return out;
}

void save_model(const LangModel& model, std::ostream& out) {
    out.write("LIDM1", 5);
    write_pod<uint32_t>(out, static_cast<uint32_t>(model.labels.size()));
    write_pod<int32_t>(out, model.ngram_min);
    write_pod<int32_t>(out, model.ngram_max);
    write_pod<uint32_t>(out, model.hash_dim);
    for (const std::string& l : model.labels) {
        write_pod<uint32_t>(out, static_cast<uint32_t>(l.size()));
        out.write(l.data(), static_cast<std::streamsize>(l.size()));
    }
    out.write(reinterpret_cast<const char*>(model.weights.data()),
              static_cast<std::streamsize>(model.weights.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(model.bias.data()),
              static_cast<std::streamsize>(model.bias.size() * sizeof(double)));
}

LangModel load_model(std::istream& in) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, "LIDM1", 5) != 0)
        throw std::runtime_error("not a language model file");
    LangModel model;
    uint32_t label_count = read_pod<uint32_t>(in);
    model.ngram_min = read_pod<int32_t>(in);
    model.ngram_max = read_pod<int32_t>(in);
    model.hash_dim = read_pod<uint32_t>(in);
    if (label_count == 0 || label_count > 4096 || model.hash_dim == 0 ||
        (model.hash_dim & (model.hash_dim - 1)) != 0)
        throw std::runtime_error("corrupt language model header");
    for (uint32_t i = 0; i < label_count; ++i) {
        uint32_t len = read_pod<uint32_t>(in);
        if (len > 64) throw std::runtime_error("corrupt label");
        std::string l(len, '\0');
        in.read(l.data(), len);
        model.labels.push_back(std::move(l));
    }
    model.weights.resize(static_cast<size_t>(label_count) * model.hash_dim);
    model.bias.resize(label_count);
    in.read(reinterpret_cast<char*>(model.weights.data()),
            static_cast<std::streamsize>(model.weights.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(model.bias.data()),
            static_cast<std::streamsize>(model.bias.size() * sizeof(double)));
    if (!in) throw std::runtime_error("model file truncated");
    return model;
}

std::unordered_map<std::string, ExternalScore> read_language_scores(std::istream& in) {
    std::unordered_map<std::string, ExternalScore> scores;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw std::runtime_error("bad score line: " + line);
        ExternalScore s;
        s.label = line.substr(t1 + 1, t2 - t1 - 1);
        s.score = std::stod(line.substr(t2 + 1));
        scores.emplace(line.substr(0, t1), std::move(s));
    }
    return scores;
}

} // namespace curator
