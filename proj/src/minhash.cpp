#include "curator/minhash.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "curator/hashing.hpp"
#include "curator/quality_filters.hpp"
#include "curator/text_util.hpp"

namespace curator {

void DedupParams::validate() const {
    if (ngram_size < 1) throw std::invalid_argument("ngram_size must be >= 1");
    if (buckets < 1 || rows_per_bucket < 1)
        throw std::invalid_argument("buckets and rows_per_bucket must be >= 1");
    if (buckets * rows_per_bucket != num_hashes)
        throw std::invalid_argument("buckets * rows_per_bucket must equal num_hashes");
}

std::vector<std::string> shingle(std::string_view text, int n) {
    std::vector<std::string> words = word_tokenize(text);
    std::vector<std::string> grams;
    if (n < 1 || words.size() < static_cast<size_t>(n)) return grams;
    grams.reserve(words.size() - n + 1);
    for (size_t i = 0; i + n <= words.size(); ++i) {
        std::string g = words[i];
        for (int k = 1; k < n; ++k) {
            g.push_back(' ');
            g.append(words[i + k]);
        }
        grams.push_back(std::move(g));
    }
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    return grams;
}

MinHasher::MinHasher(const DedupParams& params) : params_(params) {
    params_.validate();
    SplitMix64 rng(mix64(params_.hash_seed ^ 0x5DED0B1ULL));
    mul_.resize(params_.num_hashes);
    add_.resize(params_.num_hashes);
    for (int i = 0; i < params_.num_hashes; ++i) {
        mul_[i] = 1 + rng.next_below(kMersenne61 - 1);
        add_[i] = rng.next_below(kMersenne61);
    }
}

MinHashSignature MinHasher::sign(const std::vector<std::string>& shingles,
                                 std::string doc_id) const {
    if (shingles.empty()) throw std::invalid_argument("cannot sign an empty shingle set");
    MinHashSignature sig;
    sig.doc_id = std::move(doc_id);
    sig.values.assign(params_.num_hashes, UINT64_MAX);
    for (const std::string& s : shingles) {
        uint64_t base = mix64(fnv1a64(s)) % kMersenne61;
        for (int i = 0; i < params_.num_hashes; ++i) {
            uint64_t h = mulmod61(mul_[i], base) + add_[i];
            if (h >= kMersenne61) h -= kMersenne61;
            if (h < sig.values[i]) sig.values[i] = h;
        }
    }
    return sig;
}

std::vector<uint64_t> bucket_keys(const MinHashSignature& sig, const DedupParams& params) {
    params.validate();
    if (sig.values.size() != static_cast<size_t>(params.num_hashes))
        throw std::invalid_argument("signature width does not match params");
    std::vector<uint64_t> keys(params.buckets);
    for (int j = 0; j < params.buckets; ++j) {
        uint64_t h = 1469598103934665603ULL;
        auto feed = [&](uint64_t v) {
            for (int byte = 0; byte < 8; ++byte) {
                h ^= (v >> (8 * byte)) & 0xFF;
                h *= 1099511628211ULL;
            }
        };
        feed(static_cast<uint64_t>(j));
        for (int r = 0; r < params.rows_per_bucket; ++r)
            feed(sig.values[static_cast<size_t>(j) * params.rows_per_bucket + r]);
        keys[j] = mix64(h);
    }
    return keys;
}

double match_probability(double s, const DedupParams& params) {
    params.validate();
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("similarity must be in [0,1]");
    return 1.0 - std::pow(1.0 - std::pow(s, params.rows_per_bucket), params.buckets);
}

void ClusterMap::add(const std::string& id) {
    parent_.emplace(id, id);
    canonical_ = false;
}

std::string ClusterMap::find(const std::string& id) const {
    auto it = parent_.find(id);
    if (it == parent_.end()) throw std::out_of_range("unknown doc id: " + id);
    if (it->second == id) return id;
    std::string root = find(it->second);
    it->second = root; // path compression
    return root;
}

void ClusterMap::unite(const std::string& a, const std::string& b) {
    parent_.emplace(a, a);
    parent_.emplace(b, b);
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    // smaller id becomes the root, keeping merges order-insensitive
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
    canonical_ = false;
}

void ClusterMap::canonicalize() {
    // every chain is compressed and roots already hold the smallest id of
    // their cluster because unite always roots at the smaller side
    for (const auto& [id, p] : parent_) find(id);
    canonical_ = true;
}

const std::string& ClusterMap::root(const std::string& id) const {
    auto it = parent_.find(id);
    if (it == parent_.end()) throw std::out_of_range("unknown doc id: " + id);
    if (it->second == id) return it->second;
    find(id);
    return parent_.at(id);
}

size_t ClusterMap::cluster_size(const std::string& id) const {
    const std::string& r = root(id);
    size_t n = 0;
    for (const auto& [doc, p] : parent_)
        if (find(doc) == r) ++n;
    return n;
}

std::map<std::string, std::vector<std::string>> ClusterMap::clusters() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [doc, p] : parent_) out[find(doc)].push_back(doc);
    for (auto& [r, members] : out) std::sort(members.begin(), members.end());
    return out;
}

ClusterMap cluster_postings(const std::vector<std::pair<uint64_t, std::string>>& postings) {
    std::unordered_map<uint64_t, std::string> first_for_key;
    ClusterMap cm;
    for (const auto& [key, id] : postings) {
        cm.add(id);
        auto [it, inserted] = first_for_key.emplace(key, id);
        if (!inserted) cm.unite(it->second, id);
    }
    cm.canonicalize();
    return cm;
}

namespace {

struct SignedDoc {
    const Document* doc;
    std::vector<uint64_t> keys;
};

// Signatures and bucket keys for every doc with enough words; exempt ids out.
std::vector<SignedDoc> sign_corpus(const std::vector<Document>& docs, const MinHasher& hasher,
                                   std::vector<std::string>& exempt_ids) {
    std::vector<SignedDoc> out;
    for (const Document& d : docs) {
        std::vector<std::string> grams = shingle(d.text, hasher.params().ngram_size);
        if (grams.empty()) {
            exempt_ids.push_back(d.id);
            continue;
        }
        MinHashSignature sig = hasher.sign(grams, d.id);
        out.push_back(SignedDoc{&d, bucket_keys(sig, hasher.params())});
    }
    return out;
}

void accumulate_stats(const ClusterMap& cm, DedupStats& stats) {
    for (const auto& [root, members] : cm.clusters()) {
        ++stats.cluster_size_histogram[members.size()];
        stats.duplicate_docs_removed += static_cast<int64_t>(members.size()) - 1;
    }
}

} // namespace

DedupResult dedup_per_snapshot(const std::vector<Document>& docs, const DedupParams& params) {
    MinHasher hasher(params);
    DedupResult result;
    std::vector<SignedDoc> signed_docs = sign_corpus(docs, hasher, result.exempt_ids);

    std::map<std::string, std::vector<const SignedDoc*>> by_dump;
    for (const SignedDoc& sd : signed_docs) by_dump[sd.doc->dump].push_back(&sd);

    for (const auto& [dump, members] : by_dump) {
        std::vector<std::pair<uint64_t, std::string>> postings;
        for (const SignedDoc* sd : members)
            for (uint64_t key : sd->keys) postings.emplace_back(key, sd->doc->id);
        ClusterMap cm = cluster_postings(postings);
        accumulate_stats(cm, result.stats);
        for (const SignedDoc* sd : members)
            if (cm.root(sd->doc->id) == sd->doc->id) result.kept_ids.push_back(sd->doc->id);
    }

    result.kept_ids.insert(result.kept_ids.end(), result.exempt_ids.begin(),
                           result.exempt_ids.end());
    std::sort(result.kept_ids.begin(), result.kept_ids.end());
    std::sort(result.exempt_ids.begin(), result.exempt_ids.end());
    return result;
}

DedupResult dedup_global_iterative(const std::vector<Document>& docs, const DedupParams& params) {
    MinHasher hasher(params);
    DedupResult result;
    std::vector<SignedDoc> signed_docs = sign_corpus(docs, hasher, result.exempt_ids);

    // newest dump first
    std::map<std::string, std::vector<const SignedDoc*>, std::greater<>> by_dump;
    for (const SignedDoc& sd : signed_docs) by_dump[sd.doc->dump].push_back(&sd);

    std::unordered_set<uint64_t> retained_keys;
    for (const auto& [dump, members] : by_dump) {
        std::vector<std::pair<uint64_t, std::string>> postings;
        std::unordered_set<std::string> hit_retained;
        for (const SignedDoc* sd : members) {
            for (uint64_t key : sd->keys) {
                postings.emplace_back(key, sd->doc->id);
                if (retained_keys.count(key)) hit_retained.insert(sd->doc->id);
            }
        }
        ClusterMap cm = cluster_postings(postings);
        accumulate_stats(cm, result.stats);

        // a cluster touching any previously retained signature is dropped whole
        std::unordered_set<std::string> dropped_roots;
        for (const std::string& id : hit_retained) dropped_roots.insert(cm.root(id));

        for (const SignedDoc* sd : members) {
            const std::string& r = cm.root(sd->doc->id);
            if (dropped_roots.count(r)) continue;
            if (r != sd->doc->id) continue;
            result.kept_ids.push_back(sd->doc->id);
            for (uint64_t key : sd->keys) retained_keys.insert(key);
        }
    }

    result.kept_ids.insert(result.kept_ids.end(), result.exempt_ids.begin(),
                           result.exempt_ids.end());
    std::sort(result.kept_ids.begin(), result.kept_ids.end());
    std::sort(result.exempt_ids.begin(), result.exempt_ids.end());
    return result;
}

UrlDedupResult url_dedup(const std::vector<Document>& docs, uint64_t seed) {
    std::vector<size_t> order(docs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    deterministic_shuffle(order, mix64(seed ^ 0x75726C64ULL));

    UrlDedupResult result;
    std::unordered_set<std::string> seen;
    for (size_t i : order) {
        const Document& d = docs[i];
        if (d.url.empty()) {
            result.missing_url_ids.push_back(d.id);
            result.kept_ids.push_back(d.id);
            continue;
        }
        if (seen.insert(ascii_lower(d.url)).second) result.kept_ids.push_back(d.id);
    }
    std::sort(result.kept_ids.begin(), result.kept_ids.end());
    std::sort(result.missing_url_ids.begin(), result.missing_url_ids.end());
    return result;
}

namespace {

std::string zero_digits(std::string_view line) {
    std::string out(line);
    for (char& c : out)
        if (c >= '0' && c <= '9') c = '0';
    return out;
}

} // namespace

LineDedupResult line_dedup(std::vector<Document> docs, LineDedupMode mode, uint64_t seed) {
    std::vector<size_t> order(docs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    deterministic_shuffle(order, mix64(seed ^ 0x6C696E65ULL));

    LineDedupResult result;
    std::unordered_set<std::string> registry;
    std::vector<bool> dropped(docs.size(), false);

    for (size_t idx : order) {
        Document& doc = docs[idx];
        std::vector<std::string_view> lines = split_lines(doc.text);
        std::vector<bool> removed(lines.size(), false);

        if (mode == LineDedupMode::span3) {
            size_t i = 0;
            while (i + 3 <= lines.size()) {
                std::string key = zero_digits(lines[i]);
                key.push_back('\x01');
                key.append(zero_digits(lines[i + 1]));
                key.push_back('\x01');
                key.append(zero_digits(lines[i + 2]));
                if (registry.count(key)) {
                    removed[i] = removed[i + 1] = removed[i + 2] = true;
                    i += 3;
                } else {
                    registry.insert(std::move(key));
                    i += 1;
                }
            }
        } else {
            for (size_t i = 0; i < lines.size(); ++i) {
                if (lines[i].empty()) continue;
                if (mode == LineDedupMode::min_words &&
                    whitespace_split(lines[i]).size() < 10)
                    continue;
                auto [it, inserted] = registry.emplace(lines[i]);
                if (!inserted) removed[i] = true;
            }
        }

        std::string rebuilt;
        bool first = true;
        for (size_t i = 0; i < lines.size(); ++i) {
            if (removed[i]) {
                ++result.lines_removed;
                continue;
            }
            if (!first) rebuilt.push_back('\n');
            rebuilt.append(lines[i]);
            first = false;
        }
        doc.text = std::move(rebuilt);

        if (mode == LineDedupMode::min_words && count_sentences(doc.text) < 3) {
            dropped[idx] = true;
            result.dropped_doc_ids.push_back(doc.id);
        }
    }

    for (size_t i = 0; i < docs.size(); ++i)
        if (!dropped[i]) result.docs.push_back(std::move(docs[i]));
    std::sort(result.dropped_doc_ids.begin(), result.dropped_doc_ids.end());
    return result;
}

DuplicateSimResult simulate_duplicate_distribution(const DuplicateSimParams& params) {
    if (params.num_snapshots < 1 || params.tokens_per_doc < 1 ||
        params.tokens_per_snapshot < params.tokens_per_doc)
        throw std::invalid_argument("bad simulation parameters");

    DuplicateSimResult result;
    result.unique_docs = params.tokens_per_snapshot / params.tokens_per_doc;
    result.total_items = result.unique_docs * params.num_snapshots;
    int64_t n = params.sample_tokens / params.tokens_per_doc;
    if (n > result.total_items) n = result.total_items;
    result.sampled_items = n;

    // partial Fisher-Yates over [0, N) with a sparse swap table
    SplitMix64 rng(mix64(params.seed ^ 0x73696D64ULL));
    std::unordered_map<int64_t, int64_t> swaps;
    std::unordered_map<int64_t, int64_t> doc_multiplicity;
    int64_t remaining = result.total_items;
    for (int64_t k = 0; k < n; ++k) {
        int64_t j = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(remaining)));
        auto it = swaps.find(j);
        int64_t picked = it == swaps.end() ? j : it->second;
        int64_t last = remaining - 1;
        auto lt = swaps.find(last);
        swaps[j] = lt == swaps.end() ? last : lt->second;
        --remaining;
        ++doc_multiplicity[picked % result.unique_docs];
    }

    for (const auto& [doc, mult] : doc_multiplicity)
        ++result.histogram[static_cast<int>(mult)];

    int64_t distinct = 0;
    for (const auto& [mult, count] : result.histogram) distinct += count;
    if (distinct > 0)
        result.unique_fraction =
            static_cast<double>(result.histogram.count(1) ? result.histogram.at(1) : 0) /
            static_cast<double>(distinct);

    // closed-form expectation: each of the D unique docs has c copies;
    // multiplicity is hypergeometric(N, c, n)
    auto log_choose = [](double a, double b) {
        if (b < 0 || b > a) return -1e300;
        return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1);
    };
    double N = static_cast<double>(result.total_items);
    double c = static_cast<double>(params.num_snapshots);
    double D = static_cast<double>(result.unique_docs);
    double nn = static_cast<double>(n);
    int kmax = static_cast<int>(std::min<int64_t>(params.num_snapshots, n));
    for (int k = 1; k <= kmax; ++k) {
        double logp = log_choose(c, k) + log_choose(N - c, nn - k) - log_choose(N, nn);
        double e = D * std::exp(logp);
        if (e > 1e-12) result.expected[k] = e;
    }
    return result;
}

namespace {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("spill file truncated");
    return v;
}

} // namespace

void write_signatures(std::ostream& out, const std::vector<MinHashSignature>& sigs,
                      const DedupParams& params) {
    out.write("MHSG1", 5);
    write_pod<uint32_t>(out, static_cast<uint32_t>(params.num_hashes));
    write_pod<uint64_t>(out, static_cast<uint64_t>(sigs.size()));
    for (const MinHashSignature& s : sigs) {
        write_pod<uint32_t>(out, static_cast<uint32_t>(s.doc_id.size()));
        out.write(s.doc_id.data(), static_cast<std::streamsize>(s.doc_id.size()));
        out.write(reinterpret_cast<const char*>(s.values.data()),
                  static_cast<std::streamsize>(s.values.size() * sizeof(uint64_t)));
    }
}

std::vector<MinHashSignature> read_signatures(std::istream& in, const DedupParams& params) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, "MHSG1", 5) != 0)
        throw std::runtime_error("not a signature spill file");
    uint32_t width = read_pod<uint32_t>(in);
    if (width != static_cast<uint32_t>(params.num_hashes))
        throw std::runtime_error("signature width mismatch");
    uint64_t count = read_pod<uint64_t>(in);
    std::vector<MinHashSignature> sigs;
    sigs.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        MinHashSignature s;
        uint32_t len = read_pod<uint32_t>(in);
        s.doc_id.resize(len);
        in.read(s.doc_id.data(), len);
        s.values.resize(width);
        in.read(reinterpret_cast<char*>(s.values.data()),
                static_cast<std::streamsize>(width * sizeof(uint64_t)));
        if (!in) throw std::runtime_error("spill file truncated");
        sigs.push_back(std::move(s));
    }
    return sigs;
}

void write_postings(std::ostream& out, std::vector<std::pair<uint64_t, std::string>> postings) {
    std::sort(postings.begin(), postings.end());
    out.write("MHPT1", 5);
    write_pod<uint64_t>(out, static_cast<uint64_t>(postings.size()));
    for (const auto& [key, id] : postings) {
        write_pod<uint64_t>(out, key);
        write_pod<uint32_t>(out, static_cast<uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
}

std::vector<std::pair<uint64_t, std::string>> read_postings(std::istream& in) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, "MHPT1", 5) != 0)
        throw std::runtime_error("not a posting spill file");
    uint64_t count = read_pod<uint64_t>(in);
    std::vector<std::pair<uint64_t, std::string>> postings;
    postings.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        uint64_t key = read_pod<uint64_t>(in);
        uint32_t len = read_pod<uint32_t>(in);
        std::string id(len, '\0');
        in.read(id.data(), len);
        if (!in) throw std::runtime_error("spill file truncated");
        postings.emplace_back(key, std::move(id));
    }
    return postings;
}

ClusterMap cluster_posting_streams(std::vector<std::istream*> streams) {
    struct Cursor {
        std::vector<std::pair<uint64_t, std::string>> postings;
        size_t pos = 0;
    };
    std::vector<Cursor> cursors;
    for (std::istream* s : streams) cursors.push_back(Cursor{read_postings(*s), 0});

    ClusterMap cm;
    for (;;) {
        uint64_t min_key = UINT64_MAX;
        bool any = false;
        for (const Cursor& c : cursors)
            if (c.pos < c.postings.size()) {
                any = true;
                min_key = std::min(min_key, c.postings[c.pos].first);
            }
        if (!any) break;
        std::string first_id;
        for (Cursor& c : cursors) {
            while (c.pos < c.postings.size() && c.postings[c.pos].first == min_key) {
                const std::string& id = c.postings[c.pos].second;
                cm.add(id);
                if (first_id.empty()) first_id = id;
                else cm.unite(first_id, id);
                ++c.pos;
            }
        }
    }
    cm.canonicalize();
    return cm;
}

} // namespace curator
