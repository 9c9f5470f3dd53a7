#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "curator/document.hpp"

namespace curator {

// 112 hashes split into 14 buckets of 8 rows: documents sharing all 8
// minima in any bucket are duplicate candidates, detection probability
// 1-(1-s^8)^14 at Jaccard similarity s.
struct DedupParams {
    int ngram_size = 5;
    int num_hashes = 112;
    int buckets = 14;
    int rows_per_bucket = 8;
    uint64_t hash_seed = 0;

    void validate() const; // throws std::invalid_argument
};

struct MinHashSignature {
    std::string doc_id;
    std::vector<uint64_t> values; // per-hash minima over the shingle set
};

// Word 5-gram set: tokenizer words (letter runs, lowercased), consecutive
// windows, duplicates collapsed. Sorted for determinism. Fewer than n words
// yields an empty set (the document is exempt from dedup).
std::vector<std::string> shingle(std::string_view text, int n = 5);

// Universal-hash family h_i(x) = (a_i x + b_i) mod 2^61-1 over a 64-bit base
// hash of each shingle; constants derived from hash_seed.
class MinHasher {
public:
    explicit MinHasher(const DedupParams& params);

    // Throws std::invalid_argument on an empty shingle set.
    MinHashSignature sign(const std::vector<std::string>& shingles, std::string doc_id) const;

    const DedupParams& params() const { return params_; }

private:
    DedupParams params_;
    std::vector<uint64_t> mul_, add_;
};

// One stable 64-bit key per bucket, hashing (bucket index, its 8 values).
std::vector<uint64_t> bucket_keys(const MinHashSignature& sig, const DedupParams& params);

// Analytic LSH detection probability 1-(1-s^r)^b.
// Throws std::invalid_argument when s is outside [0,1].
double match_probability(double s, const DedupParams& params);

// Union-find over document ids. After canonicalize() every root is the
// lexicographically smallest member of its cluster, making results
// independent of the order unions were applied.
class ClusterMap {
public:
    void add(const std::string& id);
    void unite(const std::string& a, const std::string& b);
    void canonicalize();

    const std::string& root(const std::string& id) const;
    size_t cluster_size(const std::string& id) const;
    size_t size() const { return parent_.size(); }

    // root -> sorted members, sorted by root
    std::map<std::string, std::vector<std::string>> clusters() const;

private:
    std::string find(const std::string& id) const;
    mutable std::unordered_map<std::string, std::string> parent_;
    bool canonical_ = false;
};

// Unions every pair of doc ids sharing a bucket key.
ClusterMap cluster_postings(const std::vector<std::pair<uint64_t, std::string>>& postings);

struct DedupStats {
    std::map<size_t, int64_t> cluster_size_histogram; // size -> cluster count
    int64_t duplicate_docs_removed = 0;
};

struct DedupResult {
    std::vector<std::string> kept_ids;   // sorted
    std::vector<std::string> exempt_ids; // sorted; fewer than n words, always kept
    DedupStats stats;
};

// Clustering and keep-one applied within each dump only; the keep-one policy
// retains the lexicographically smallest doc id of each cluster.
DedupResult dedup_per_snapshot(const std::vector<Document>& docs, const DedupParams& params);

// Snapshots processed newest dump first (descending dump id); each snapshot
// is deduplicated against itself plus the signatures of all previously kept
// documents, so earlier (newer) dumps win across dumps.
DedupResult dedup_global_iterative(const std::vector<Document>& docs, const DedupParams& params);

struct UrlDedupResult {
    std::vector<std::string> kept_ids;        // sorted
    std::vector<std::string> missing_url_ids; // kept unconditionally, flagged
};

// One document per lowercased URL; the survivor is the first occurrence in a
// seeded shuffle of the input.
UrlDedupResult url_dedup(const std::vector<Document>& docs, uint64_t seed);

enum class LineDedupMode { plain, min_words, span3 };

struct LineDedupResult {
    std::vector<Document> docs; // input order, texts rewritten; dropped docs removed
    std::vector<std::string> dropped_doc_ids;
    int64_t lines_removed = 0;
};

// Global line-occurrence registry walked in seeded document order; the first
// occurrence of a line (or of a 3-line span with digits zeroed, in span3
// mode) is kept, later ones are removed. min_words mode only deduplicates
// lines of >= 10 words and drops documents left with < 3 sentences.
LineDedupResult line_dedup(std::vector<Document> docs, LineDedupMode mode, uint64_t seed);

struct DuplicateSimParams {
    int num_snapshots = 100;
    int64_t tokens_per_snapshot = 200'000'000'000;
    int64_t tokens_per_doc = 1'000;
    int64_t sample_tokens = 0;
    uint64_t seed = 0;
};

struct DuplicateSimResult {
    std::map<int, int64_t> histogram; // multiplicity -> distinct sampled docs
    std::map<int, double> expected;   // hypergeometric expectation per multiplicity
    int64_t unique_docs = 0;          // docs per snapshot
    int64_t total_items = 0;          // docs per snapshot x num_snapshots
    int64_t sampled_items = 0;
    double unique_fraction = 0.0;     // histogram[1] / distinct sampled docs
};

// Samples documents uniformly without replacement from num_snapshots exact
// copies of one snapshot and reports how often each sampled document repeats.
DuplicateSimResult simulate_duplicate_distribution(const DuplicateSimParams& params);

// Signature spill file: "MHSG1" magic, little-endian
// (u32 id length, id bytes, num_hashes x u64) per record.
void write_signatures(std::ostream& out, const std::vector<MinHashSignature>& sigs,
                      const DedupParams& params);
std::vector<MinHashSignature> read_signatures(std::istream& in, const DedupParams& params);

// Posting spill file: "MHPT1" magic, records sorted by key for merge-join.
void write_postings(std::ostream& out, std::vector<std::pair<uint64_t, std::string>> postings);
std::vector<std::pair<uint64_t, std::string>> read_postings(std::istream& in);

// Merge-join clustering across sorted posting files.
ClusterMap cluster_posting_streams(std::vector<std::istream*> streams);

} // namespace curator
