#include "curator/threshold_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curator {

std::function<double(const DocumentMetrics&)> metric_selector(const std::string& name) {
    using Getter = std::function<double(const DocumentMetrics&)>;
    static const std::vector<std::pair<std::string, Getter>> table = [] {
        std::vector<std::pair<std::string, Getter>> t;
        t.emplace_back("word_count",
                       [](const DocumentMetrics& m) { return static_cast<double>(m.word_count); });
        t.emplace_back("line_count",
                       [](const DocumentMetrics& m) { return static_cast<double>(m.line_count); });
        t.emplace_back("mean_word_length",
                       [](const DocumentMetrics& m) { return m.mean_word_length; });
        t.emplace_back("symbol_to_word_ratio",
                       [](const DocumentMetrics& m) { return m.symbol_to_word_ratio; });
        t.emplace_back("bullet_line_fraction",
                       [](const DocumentMetrics& m) { return m.bullet_line_fraction; });
        t.emplace_back("ellipsis_line_fraction",
                       [](const DocumentMetrics& m) { return m.ellipsis_line_fraction; });
        t.emplace_back("alpha_word_fraction",
                       [](const DocumentMetrics& m) { return m.alpha_word_fraction; });
        t.emplace_back("stop_word_hits", [](const DocumentMetrics& m) {
            return static_cast<double>(m.stop_word_hits);
        });
        t.emplace_back("duplicate_line_fraction",
                       [](const DocumentMetrics& m) { return m.duplicate_line_fraction; });
        t.emplace_back("duplicate_line_char_fraction",
                       [](const DocumentMetrics& m) { return m.duplicate_line_char_fraction; });
        t.emplace_back("duplicate_paragraph_fraction",
                       [](const DocumentMetrics& m) { return m.duplicate_paragraph_fraction; });
        t.emplace_back("duplicate_paragraph_char_fraction", [](const DocumentMetrics& m) {
            return m.duplicate_paragraph_char_fraction;
        });
        t.emplace_back("lines_end_punct_fraction",
                       [](const DocumentMetrics& m) { return m.lines_end_punct_fraction; });
        t.emplace_back("lines_shorter_30_fraction",
                       [](const DocumentMetrics& m) { return m.lines_shorter_30_fraction; });
        t.emplace_back("avg_words_per_line",
                       [](const DocumentMetrics& m) { return m.avg_words_per_line; });
        t.emplace_back("avg_line_length",
                       [](const DocumentMetrics& m) { return m.avg_line_length; });
        t.emplace_back("line_with_most_3_words_fraction", [](const DocumentMetrics& m) {
            return m.line_with_most_3_words_fraction;
        });
        for (int n = 2; n <= 4; ++n)
            t.emplace_back("top_ngram_char_fraction." + std::to_string(n),
                           [n](const DocumentMetrics& m) {
                               auto it = m.top_ngram_char_fraction.find(n);
                               return it == m.top_ngram_char_fraction.end() ? 0.0 : it->second;
                           });
        for (int n = 5; n <= 10; ++n)
            t.emplace_back("duplicated_ngram_char_fraction." + std::to_string(n),
                           [n](const DocumentMetrics& m) {
                               auto it = m.duplicated_ngram_char_fraction.find(n);
                               return it == m.duplicated_ngram_char_fraction.end() ? 0.0
                                                                                   : it->second;
                           });
        return t;
    }();
    for (const auto& [key, getter] : table)
        if (key == name) return getter;
    throw std::invalid_argument("unknown metric: " + name);
}

namespace {

size_t bin_index(double v, const std::vector<double>& edges) {
    size_t bins = edges.size() - 1;
    if (v < edges.front()) return 0;
    if (v >= edges.back()) return bins - 1;
    // first edge strictly greater than v, minus one
    size_t idx = static_cast<size_t>(
        std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
    if (idx == 0) return 0;
    --idx;
    return std::min(idx, bins - 1);
}

} // namespace

Histogram collect_histogram(const std::vector<DocumentMetrics>& corpus,
                            const std::string& metric_name, const Binning& binning) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    if (binning.bins < 1) throw std::invalid_argument("need at least one bin");

    auto getter = metric_selector(metric_name);
    std::vector<double> values;
    values.reserve(corpus.size());
    for (const DocumentMetrics& m : corpus) values.push_back(getter(m));

    Histogram h;
    h.metric_name = metric_name;
    h.sample_count = static_cast<int64_t>(values.size());

    if (binning.kind == Binning::Kind::fixed_width) {
        if (!(binning.hi > binning.lo)) throw std::invalid_argument("bad bin range");
        double width = (binning.hi - binning.lo) / binning.bins;
        for (int i = 0; i <= binning.bins; ++i) h.bin_edges.push_back(binning.lo + width * i);
        h.bin_edges.back() = binning.hi; // avoid accumulated rounding on the last edge
    } else {
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i <= binning.bins; ++i) {
            double q = static_cast<double>(i) / binning.bins;
            size_t at = std::min(sorted.size() - 1,
                                 static_cast<size_t>(q * static_cast<double>(sorted.size())));
            h.bin_edges.push_back(sorted[at]);
        }
        h.bin_edges.back() = sorted.back();
        // quantile edges can repeat on discrete data; widen collapsed bins
        for (size_t i = 1; i < h.bin_edges.size(); ++i)
            if (h.bin_edges[i] <= h.bin_edges[i - 1])
                h.bin_edges[i] = std::nextafter(h.bin_edges[i - 1], 1e300);
    }

    h.densities.assign(static_cast<size_t>(binning.bins), 0.0);
    for (double v : values) h.densities[bin_index(v, h.bin_edges)] += 1.0;
    for (double& d : h.densities) d /= static_cast<double>(values.size());
    return h;
}

Histogram collect_histogram(const std::vector<DocumentMetrics>& corpus,
                            const std::string& metric_name,
                            const std::vector<double>& bin_edges) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end()))
        throw std::invalid_argument("need at least two sorted bin edges");
    auto getter = metric_selector(metric_name);
    Histogram h;
    h.metric_name = metric_name;
    h.bin_edges = bin_edges;
    h.sample_count = static_cast<int64_t>(corpus.size());
    h.densities.assign(bin_edges.size() - 1, 0.0);
    for (const DocumentMetrics& m : corpus) h.densities[bin_index(getter(m), h.bin_edges)] += 1.0;
    for (double& d : h.densities) d /= static_cast<double>(corpus.size());
    return h;
}

Histogram merge_histograms(const Histogram& a, const Histogram& b) {
    if (a.bin_edges != b.bin_edges || a.metric_name != b.metric_name)
        throw std::invalid_argument("histograms are not mergeable");
    Histogram out = a;
    out.sample_count = a.sample_count + b.sample_count;
    double wa = static_cast<double>(a.sample_count) / static_cast<double>(out.sample_count);
    double wb = static_cast<double>(b.sample_count) / static_cast<double>(out.sample_count);
    for (size_t i = 0; i < out.densities.size(); ++i)
        out.densities[i] = a.densities[i] * wa + b.densities[i] * wb;
    return out;
}

ThresholdReport suggest_thresholds(const Histogram& hist_high, const Histogram& hist_low,
                                   double min_gap) {
    if (hist_high.bin_edges != hist_low.bin_edges)
        throw std::invalid_argument("histograms binned differently");

    size_t bins = hist_low.densities.size();
    std::vector<bool> excess(bins);
    for (size_t i = 0; i < bins; ++i)
        excess[i] = hist_low.densities[i] - hist_high.densities[i] >= min_gap;

    ThresholdReport report;
    size_t i = 0;
    while (i < bins) {
        if (!excess[i]) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < bins && excess[j + 1]) ++j;

        double low_mass = 0.0, high_mass = 0.0, excess_mass = 0.0;
        for (size_t k = i; k <= j; ++k) {
            low_mass += hist_low.densities[k];
            high_mass += hist_high.densities[k];
            excess_mass += hist_low.densities[k] - hist_high.densities[k];
        }

        if (i == 0) {
            ThresholdSuggestion s;
            s.direction = ThresholdSuggestion::Direction::drop_below;
            s.threshold = hist_low.bin_edges[j + 1];
            s.mass_removed_low = low_mass;
            s.mass_removed_high = high_mass;
            report.suggestions.push_back(s);
        } else if (j == bins - 1) {
            ThresholdSuggestion s;
            s.direction = ThresholdSuggestion::Direction::drop_at_or_above;
            s.threshold = hist_low.bin_edges[i];
            s.mass_removed_low = low_mass;
            s.mass_removed_high = high_mass;
            report.suggestions.push_back(s);
        } else {
            report.interior_regions.push_back(
                {hist_low.bin_edges[i], hist_low.bin_edges[j + 1], excess_mass});
        }
        i = j + 1;
    }
    return report;
}

void write_threshold_report(std::ostream& out, const std::string& metric_name,
                            const ThresholdReport& report) {
    out << "metric\tdirection\tthreshold\tmass_removed_low\tmass_removed_high\n";
    for (const ThresholdSuggestion& s : report.suggestions) {
        out << metric_name << '\t'
            << (s.direction == ThresholdSuggestion::Direction::drop_below ? "drop_below"
                                                                          : "drop_at_or_above")
            << '\t' << s.threshold << '\t' << s.mass_removed_low << '\t' << s.mass_removed_high
            << '\n';
    }
    for (const auto& r : report.interior_regions)
        out << "# interior region [" << r.lo << ", " << r.hi << ") excess mass " << r.excess_mass
            << " (diagnostic only)\n";
    if (report.suggestions.empty()) out << "# no edge-anchored excess regions found\n";
}

} // namespace curator
