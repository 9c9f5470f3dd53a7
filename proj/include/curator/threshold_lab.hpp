#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "curator/quality_filters.hpp"

namespace curator {

// Normalized metric histogram. Bins are [edge_i, edge_i+1) with the last bin
// closed on the right; out-of-range values clamp into the end bins.
struct Histogram {
    std::string metric_name;
    std::vector<double> bin_edges; // sorted, size = densities.size() + 1
    std::vector<double> densities; // sum to 1
    int64_t sample_count = 0;
};

struct Binning {
    enum class Kind { fixed_width, quantile } kind = Kind::fixed_width;
    int bins = 20;
    double lo = 0.0; // fixed_width range
    double hi = 1.0;
};

// Named accessor into DocumentMetrics; throws std::invalid_argument for an
// unknown name. Names match the field names ("lines_end_punct_fraction",
// "top_ngram_char_fraction.2", ...).
std::function<double(const DocumentMetrics&)> metric_selector(const std::string& name);

// One streaming pass (two for quantile binning). Throws on an empty corpus.
Histogram collect_histogram(const std::vector<DocumentMetrics>& corpus,
                            const std::string& metric_name, const Binning& binning);

// Same, with caller-provided edges (e.g. reusing another histogram's edges).
Histogram collect_histogram(const std::vector<DocumentMetrics>& corpus,
                            const std::string& metric_name,
                            const std::vector<double>& bin_edges);

// Merge of partial histograms with identical edges.
Histogram merge_histograms(const Histogram& a, const Histogram& b);

struct ThresholdSuggestion {
    enum class Direction { drop_below, drop_at_or_above };
    Direction direction = Direction::drop_below;
    double threshold = 0.0;
    double mass_removed_low = 0.0;  // density mass removed from the low-quality corpus
    double mass_removed_high = 0.0; // collateral mass in the high-quality corpus
};

struct ThresholdReport {
    std::vector<ThresholdSuggestion> suggestions; // edge-anchored regions only
    struct InteriorRegion {
        double lo = 0.0, hi = 0.0;
        double excess_mass = 0.0;
    };
    std::vector<InteriorRegion> interior_regions; // diagnostics, not actionable
};

// Maximal contiguous bin regions where density_low - density_high >= min_gap.
// A region anchored at the left histogram edge becomes "drop metric < right
// edge of region"; anchored at the right edge, "drop metric >= left edge".
// Throws when bin edges differ.
ThresholdReport suggest_thresholds(const Histogram& hist_high, const Histogram& hist_low,
                                   double min_gap = 0.01);

// Tabular rendering plus machine-readable TSV rows
// (metric, direction, threshold, mass_removed_low, mass_removed_high).
void write_threshold_report(std::ostream& out, const std::string& metric_name,
                            const ThresholdReport& report);

} // namespace curator
