#include "curator/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "curator/hashing.hpp"
#include "curator/language_id.hpp"
#include "curator/record_io.hpp"
#include "curator/text_extraction.hpp"
#include "curator/text_util.hpp"

namespace curator {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(DedupMode m) {
    switch (m) {
        case DedupMode::none: return "none";
        case DedupMode::per_snapshot: return "per_snapshot";
        case DedupMode::global_iterative: return "global_iterative";
        case DedupMode::url: return "url";
        case DedupMode::line_plain: return "line_plain";
        case DedupMode::line_min_words: return "line_min_words";
        case DedupMode::line_span3: return "line_span3";
    }
    return "none";
}

std::optional<DedupMode> dedup_mode_from_string(std::string_view s) {
    for (DedupMode m : {DedupMode::none, DedupMode::per_snapshot, DedupMode::global_iterative,
                        DedupMode::url, DedupMode::line_plain, DedupMode::line_min_words,
                        DedupMode::line_span3})
        if (s == to_string(m)) return m;
    return std::nullopt;
}

int round_score(double score) {
    return static_cast<int>(std::floor(score + 0.5));
}

std::unordered_map<std::string, double> read_edu_scores(std::istream& in) {
    std::unordered_map<std::string, double> scores;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("bad score line: " + line);
        scores[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
    }
    return scores;
}

std::vector<Document> score_gate(std::vector<Document> docs,
                                 const std::unordered_map<std::string, double>& scores,
                                 int threshold, StageCounts* counts) {
    std::vector<Document> kept;
    kept.reserve(docs.size());
    for (Document& doc : docs) {
        if (counts) ++counts->input;
        auto it = scores.find(doc.id);
        if (it == scores.end()) {
            if (counts) {
                ++counts->dropped;
                ++counts->rule_drops["unscored"];
            }
            continue;
        }
        if (round_score(it->second) < threshold) {
            if (counts) {
                ++counts->dropped;
                ++counts->rule_drops["below_threshold"];
            }
            continue;
        }
        if (counts) ++counts->kept;
        kept.push_back(std::move(doc));
    }
    return kept;
}

int64_t count_tokens(std::string_view text, const TokenCounter& counter) {
    return counter.count(text);
}

std::string to_output_json(const Document& doc) {
    ordered_json j;
    j["text"] = doc.text;
    j["id"] = doc.id;
    j["dump"] = doc.dump;
    j["url"] = doc.url;
    j["date"] = doc.date;
    j["file_path"] = doc.file_path;
    j["language"] = doc.language;
    j["language_score"] = doc.language_score;
    j["token_count"] = doc.token_count;
    return j.dump();
}

Document document_from_json(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line);
    Document doc;
    doc.text = j.value("text", "");
    doc.id = j.value("id", "");
    doc.dump = j.value("dump", "");
    doc.url = j.value("url", "");
    doc.date = j.value("date", "");
    doc.file_path = j.value("file_path", "");
    doc.language = j.value("language", "");
    doc.language_score = j.value("language_score", 0.0);
    doc.token_count = j.value("token_count", static_cast<int64_t>(0));
    return doc;
}

namespace {

// Response payloads are full HTTP messages; the body follows the header
// block. Returns the body and any charset= parameter from Content-Type.
std::pair<std::string_view, std::string> split_http_payload(std::string_view payload) {
    if (!payload.starts_with("HTTP/")) return {payload, ""};
    size_t sep = payload.find("\r\n\r\n");
    size_t body_at = sep == std::string_view::npos ? payload.size() : sep + 4;
    std::string_view head = payload.substr(0, body_at);
    std::string charset;
    size_t ct = 0;
    for (size_t i = 0; i < head.size(); ++i) {
        if (starts_with_ci(head.substr(i), "content-type:")) {
            ct = i + 13;
            size_t eol = head.find("\r\n", ct);
            std::string_view value = head.substr(ct, eol == std::string_view::npos
                                                         ? head.size() - ct
                                                         : eol - ct);
            size_t cs = 0;
            for (size_t k = 0; k + 8 <= value.size(); ++k) {
                if (starts_with_ci(value.substr(k), "charset=")) {
                    cs = k + 8;
                    size_t end = cs;
                    while (end < value.size() && value[end] != ';' && value[end] != ' ' &&
                           value[end] != '"')
                        ++end;
                    size_t begin = cs;
                    if (begin < value.size() && value[begin] == '"') ++begin;
                    charset = std::string(trim(value.substr(begin, end - begin)));
                    break;
                }
            }
            break;
        }
    }
    return {payload.substr(body_at), charset};
}

std::string dump_from_path(const std::string& path, const std::string& fallback) {
    size_t at = path.find("CC-MAIN-");
    if (at != std::string::npos && at + 15 <= path.size()) {
        std::string candidate = path.substr(at, 15); // CC-MAIN-YYYY-WW
        bool ok = true;
        for (size_t i = 8; i < 15; ++i) {
            char c = candidate[i];
            if (i == 12 ? c != '-' : !(c >= '0' && c <= '9')) ok = false;
        }
        if (ok) return candidate;
    }
    return fallback;
}

struct PendingDoc {
    Document doc;
    std::string payload;         // raw response payload (warc input)
    std::string charset;         // from the HTTP headers
    bool needs_extract = false;
};

struct LoadResult {
    std::vector<PendingDoc> docs;
    std::vector<std::string> errors;
};

LoadResult load_inputs(const PipelineConfig& config) {
    LoadResult loaded;
    for (const std::string& path : config.inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open input: " + path);

        if (config.format == InputFormat::jsonl) {
            std::string line;
            while (std::getline(in, line)) {
                if (trim(line).empty()) continue;
                PendingDoc pd;
                pd.doc = document_from_json(line);
                if (pd.doc.dump.empty()) pd.doc.dump = config.dump_id;
                if (pd.doc.file_path.empty()) pd.doc.file_path = path;
                loaded.docs.push_back(std::move(pd));
            }
            continue;
        }

        WarcReader::Options opts;
        opts.source_path = path;
        if (config.format == InputFormat::wet) {
            WetReader reader(in, opts);
            while (auto item = reader.next()) {
                if (std::holds_alternative<RecordError>(*item)) {
                    const RecordError& e = std::get<RecordError>(*item);
                    loaded.errors.push_back(path + "@" + std::to_string(e.byte_offset) + ": " +
                                            e.message);
                    continue;
                }
                PendingDoc pd;
                pd.doc = std::get<Document>(std::move(*item));
                pd.doc.text = normalize_text(pd.doc.text);
                pd.doc.dump = dump_from_path(path, config.dump_id);
                loaded.docs.push_back(std::move(pd));
            }
        } else {
            opts.skip_non_response = true;
            WarcReader reader(in, opts);
            while (auto item = reader.next()) {
                if (std::holds_alternative<RecordError>(*item)) {
                    const RecordError& e = std::get<RecordError>(*item);
                    loaded.errors.push_back(path + "@" + std::to_string(e.byte_offset) + ": " +
                                            e.message);
                    continue;
                }
                RawRecord rec = std::get<RawRecord>(std::move(*item));
                PendingDoc pd;
                pd.doc.id = rec.record_id;
                pd.doc.url = rec.target_uri.value_or("");
                pd.doc.date = rec.date;
                pd.doc.file_path = path;
                pd.doc.dump = dump_from_path(path, config.dump_id);
                auto [body, charset] = split_http_payload(rec.payload);
                pd.payload = std::string(body);
                pd.charset = charset;
                pd.needs_extract = true;
                loaded.docs.push_back(std::move(pd));
            }
        }
    }
    return loaded;
}

class ManifestBuilder {
public:
    explicit ManifestBuilder(const TokenCounter& counter) : counter_(counter) {}

    StageCounts& begin_stage(const std::string& name) {
        stages_.push_back(StageCounts{name, 0, 0, 0, 0, 0, 0, {}});
        return stages_.back();
    }

    int64_t tokens(const Document& doc) const {
        if (doc.text.empty()) return 0;
        return counter_.count(doc.text);
    }

    std::vector<StageCounts> take() { return std::move(stages_); }

private:
    const TokenCounter& counter_;
    std::vector<StageCounts> stages_;
};

// Applies a per-document decision function as one manifest stage.
std::vector<PendingDoc> run_filter_stage(
    std::vector<PendingDoc> docs, ManifestBuilder& mb, const std::string& name,
    const std::function<FilterDecision(PendingDoc&)>& decide) {
    StageCounts& counts = mb.begin_stage(name);
    std::vector<PendingDoc> kept;
    kept.reserve(docs.size());
    for (PendingDoc& pd : docs) {
        int64_t toks = mb.tokens(pd.doc);
        ++counts.input;
        counts.input_tokens += toks;
        FilterDecision d = decide(pd);
        if (d.keep) {
            ++counts.kept;
            counts.kept_tokens += toks;
            kept.push_back(std::move(pd));
        } else {
            ++counts.dropped;
            counts.dropped_tokens += toks;
            ++counts.rule_drops[d.rule_id.empty() ? "unspecified" : d.rule_id];
        }
    }
    return kept;
}

} // namespace

RunResult run_pipeline(const PipelineConfig& config) {
    if (config.output_dir.empty()) throw std::invalid_argument("output_dir is required");
    if (config.shard_count < 1) throw std::invalid_argument("shard_count must be >= 1");
    config.dedup_params.validate();

    TokenCounter counter = TokenCounter::whitespace();
    if (config.token_counter == TokenCounterKind::bpe) {
        std::ifstream merges(config.bpe_merges_path);
        if (!merges) throw std::runtime_error("cannot open merges file: " + config.bpe_merges_path);
        counter = TokenCounter::bpe_from_merges(merges);
    }

    UrlBlocklist blocklist;
    if (config.stages.url_filter && !config.blocklist_path.empty()) {
        std::ifstream bl(config.blocklist_path);
        if (!bl) throw std::runtime_error("cannot open blocklist: " + config.blocklist_path);
        blocklist = UrlBlocklist::parse(bl);
    }

    std::optional<LangModel> lang_model;
    std::unordered_map<std::string, ExternalScore> lang_scores;
    if (config.stages.language) {
        if (!config.lang_model_path.empty()) {
            std::ifstream mf(config.lang_model_path, std::ios::binary);
            if (!mf) throw std::runtime_error("cannot open model: " + config.lang_model_path);
            lang_model = load_model(mf);
        } else if (!config.lang_scores_path.empty()) {
            std::ifstream sf(config.lang_scores_path);
            if (!sf) throw std::runtime_error("cannot open scores: " + config.lang_scores_path);
            lang_scores = read_language_scores(sf);
        } else {
            throw std::runtime_error(
                "language stage enabled but neither lang_model_path nor lang_scores_path set");
        }
    }

    std::unordered_map<std::string, double> edu_scores;
    if (config.stages.score_gate) {
        std::ifstream ef(config.edu_scores_path);
        if (!ef) throw std::runtime_error("cannot open edu scores: " + config.edu_scores_path);
        edu_scores = read_edu_scores(ef);
    }

    ManifestBuilder mb(counter);
    RunManifest manifest;
    manifest.seed = config.seed;
    manifest.token_counter = config.token_counter == TokenCounterKind::bpe ? "bpe" : "whitespace";
    manifest.dedup_mode = std::string(to_string(config.stages.dedup));

    LoadResult loaded = load_inputs(config);
    std::vector<PendingDoc> docs = std::move(loaded.docs);
    manifest.record_errors = std::move(loaded.errors);
    std::sort(manifest.record_errors.begin(), manifest.record_errors.end());
    manifest.records_in = static_cast<int64_t>(docs.size());

    // 1. URL blocklist
    if (config.stages.url_filter) {
        docs = run_filter_stage(docs, mb, "url_filter", [&](PendingDoc& pd) {
            return url_filter(pd.doc.url, blocklist);
        });
    }

    // 2. text extraction (WARC payloads only; WET and JSONL pass through)
    if (config.stages.extract) {
        StageCounts& counts = mb.begin_stage("extract");
        std::vector<PendingDoc> kept;
        kept.reserve(docs.size());
        for (PendingDoc& pd : docs) {
            ++counts.input;
            if (!pd.needs_extract) {
                int64_t toks = mb.tokens(pd.doc);
                counts.input_tokens += toks;
                ++counts.kept;
                counts.kept_tokens += toks;
                kept.push_back(std::move(pd));
                continue;
            }
            std::string reason;
            std::optional<std::string_view> charset;
            if (!pd.charset.empty()) charset = pd.charset;
            std::optional<ExtractedText> extracted =
                extract_main_text(pd.payload, charset, ExtractOptions{}, &reason);
            if (!extracted) {
                ++counts.dropped;
                ++counts.rule_drops[reason.empty() ? "unspecified" : reason];
                continue;
            }
            pd.doc.text = std::move(extracted->text);
            pd.payload.clear();
            pd.needs_extract = false;
            int64_t toks = mb.tokens(pd.doc);
            counts.input_tokens += toks;
            ++counts.kept;
            counts.kept_tokens += toks;
            kept.push_back(std::move(pd));
        }
        docs = std::move(kept);
    }

    // 3. language gate
    if (config.stages.language) {
        docs = run_filter_stage(docs, mb, "language", [&](PendingDoc& pd) {
            FilterDecision d;
            d.stage = FilterStage::language;
            std::string label;
            double score = 0.0;
            if (lang_model) {
                try {
                    Classification c = classify(*lang_model, pd.doc.text);
                    label = c.label;
                    score = c.score;
                } catch (const std::invalid_argument&) {
                    d.keep = false;
                    d.rule_id = "empty";
                    return d;
                }
            } else {
                auto it = lang_scores.find(pd.doc.id);
                if (it == lang_scores.end()) {
                    d.keep = false;
                    d.rule_id = "unscored";
                    return d;
                }
                label = it->second.label;
                score = it->second.score;
            }
            pd.doc.language = label;
            pd.doc.language_score = score;
            if (label != config.target_language) {
                d.keep = false;
                d.rule_id = "not_target_language";
                d.triggering_value = score;
                return d;
            }
            if (!config.filters.lang_argmax_only &&
                !passes_gate(score, config.filters.lang_threshold)) {
                d.keep = false;
                d.rule_id = "below_threshold";
                d.triggering_value = score;
            }
            return d;
        });
    }

    // 4-5. gopher quality and repetition
    if (config.stages.gopher_quality) {
        docs = run_filter_stage(docs, mb, "gopher_quality", [&](PendingDoc& pd) {
            return gopher_quality(compute_metrics(pd.doc.text, config.filters.short_line_len),
                                  config.filters);
        });
    }
    if (config.stages.gopher_repetition) {
        docs = run_filter_stage(docs, mb, "gopher_repetition", [&](PendingDoc& pd) {
            return gopher_repetition(compute_metrics(pd.doc.text, config.filters.short_line_len),
                                     config.filters);
        });
    }

    // 6. dedup
    if (config.stages.dedup != DedupMode::none) {
        StageCounts& counts = mb.begin_stage("dedup");
        std::vector<Document> plain;
        plain.reserve(docs.size());
        for (PendingDoc& pd : docs) plain.push_back(pd.doc);
        for (const Document& d : plain) {
            ++counts.input;
            counts.input_tokens += mb.tokens(d);
        }

        auto keep_by_id = [&](const std::vector<std::string>& kept_ids) {
            std::unordered_set<std::string> keep(kept_ids.begin(), kept_ids.end());
            std::vector<PendingDoc> kept;
            kept.reserve(docs.size());
            for (PendingDoc& pd : docs) {
                int64_t toks = mb.tokens(pd.doc);
                if (keep.count(pd.doc.id)) {
                    ++counts.kept;
                    counts.kept_tokens += toks;
                    kept.push_back(std::move(pd));
                } else {
                    ++counts.dropped;
                    counts.dropped_tokens += toks;
                    ++counts.rule_drops["duplicate"];
                }
            }
            return kept;
        };

        switch (config.stages.dedup) {
            case DedupMode::per_snapshot:
            case DedupMode::global_iterative: {
                DedupResult r = config.stages.dedup == DedupMode::per_snapshot
                                    ? dedup_per_snapshot(plain, config.dedup_params)
                                    : dedup_global_iterative(plain, config.dedup_params);
                manifest.dedup_cluster_histogram = r.stats.cluster_size_histogram;
                manifest.dedup_exempt = static_cast<int64_t>(r.exempt_ids.size());
                manifest.dedup_duplicates_removed = r.stats.duplicate_docs_removed;
                if (!config.spill_dir.empty()) {
                    fs::create_directories(config.spill_dir);
                    MinHasher hasher(config.dedup_params);
                    std::vector<MinHashSignature> sigs;
                    for (const Document& d : plain) {
                        std::vector<std::string> grams =
                            shingle(d.text, config.dedup_params.ngram_size);
                        if (!grams.empty()) sigs.push_back(hasher.sign(grams, d.id));
                    }
                    std::ofstream sf(fs::path(config.spill_dir) / "signatures.mhsg",
                                     std::ios::binary);
                    write_signatures(sf, sigs, config.dedup_params);
                    std::vector<std::pair<uint64_t, std::string>> postings;
                    for (const MinHashSignature& s : sigs)
                        for (uint64_t k : bucket_keys(s, config.dedup_params))
                            postings.emplace_back(k, s.doc_id);
                    std::ofstream pf(fs::path(config.spill_dir) / "postings.mhpt",
                                     std::ios::binary);
                    write_postings(pf, std::move(postings));
                }
                docs = keep_by_id(r.kept_ids);
                break;
            }
            case DedupMode::url: {
                UrlDedupResult r = url_dedup(plain, config.seed);
                manifest.dedup_exempt = static_cast<int64_t>(r.missing_url_ids.size());
                docs = keep_by_id(r.kept_ids);
                break;
            }
            case DedupMode::line_plain:
            case DedupMode::line_min_words:
            case DedupMode::line_span3: {
                LineDedupMode mode = config.stages.dedup == DedupMode::line_plain
                                         ? LineDedupMode::plain
                                         : config.stages.dedup == DedupMode::line_min_words
                                               ? LineDedupMode::min_words
                                               : LineDedupMode::span3;
                LineDedupResult r = line_dedup(plain, mode, config.seed);
                std::unordered_map<std::string, const Document*> rewritten;
                for (const Document& d : r.docs) rewritten[d.id] = &d;
                std::vector<PendingDoc> kept;
                for (PendingDoc& pd : docs) {
                    int64_t toks = mb.tokens(pd.doc);
                    auto it = rewritten.find(pd.doc.id);
                    if (it == rewritten.end()) {
                        ++counts.dropped;
                        counts.dropped_tokens += toks;
                        ++counts.rule_drops["too_few_sentences_after_dedup"];
                        continue;
                    }
                    pd.doc.text = it->second->text;
                    ++counts.kept;
                    counts.kept_tokens += toks;
                    kept.push_back(std::move(pd));
                }
                docs = std::move(kept);
                break;
            }
            case DedupMode::none:
                break;
        }
    }

    // 7. C4 rules: line filters, then document rules
    if (config.stages.c4) {
        docs = run_filter_stage(docs, mb, "c4", [&](PendingDoc& pd) {
            C4LineResult lr = c4_line_rules(pd.doc.text, config.filters);
            if (!lr.decision.keep) return lr.decision;
            pd.doc.text = std::move(lr.kept_text);
            return c4_doc_rules(pd.doc.text,
                                compute_metrics(pd.doc.text, config.filters.short_line_len),
                                config.filters);
        });
    }

    // 8. custom filters
    if (config.stages.fineweb_custom) {
        docs = run_filter_stage(docs, mb, "fineweb_custom", [&](PendingDoc& pd) {
            bool sampled = (mix64(fnv1a64(pd.doc.id) ^ config.seed) & 1) != 0;
            return fineweb_custom(compute_metrics(pd.doc.text, config.filters.short_line_len),
                                  config.filters, sampled);
        });
    }

    // 9. PII scrubbing (rewrites text, drops nothing)
    if (config.stages.pii) {
        StageCounts& counts = mb.begin_stage("pii");
        for (PendingDoc& pd : docs) {
            int64_t toks = mb.tokens(pd.doc);
            ++counts.input;
            counts.input_tokens += toks;
            auto [scrubbed, report] = anonymize(pd.doc.text);
            pd.doc.text = std::move(scrubbed);
            manifest.scrub.emails_replaced += report.emails_replaced;
            manifest.scrub.ips_replaced += report.ips_replaced;
            manifest.scrub.ips_skipped_private += report.ips_skipped_private;
            ++counts.kept;
            counts.kept_tokens += toks;
        }
    }

    // 10. educational score gate
    if (config.stages.score_gate) {
        docs = run_filter_stage(docs, mb, "score_gate", [&](PendingDoc& pd) {
            FilterDecision d;
            d.stage = FilterStage::score_gate;
            auto it = edu_scores.find(pd.doc.id);
            if (it == edu_scores.end()) {
                d.keep = false;
                d.rule_id = "unscored";
                return d;
            }
            int rounded = round_score(it->second);
            d.triggering_value = rounded;
            if (rounded < config.edu_threshold) {
                d.keep = false;
                d.rule_id = "below_threshold";
            }
            return d;
        });
    }

    // output: token counts, empty-text guard, shard by id hash, sort by (dump, id)
    {
        StageCounts& counts = mb.begin_stage("output");
        std::vector<PendingDoc> kept;
        for (PendingDoc& pd : docs) {
            ++counts.input;
            int64_t toks = mb.tokens(pd.doc);
            counts.input_tokens += toks;
            if (toks == 0) {
                ++counts.dropped;
                ++counts.rule_drops["empty_output"];
                continue;
            }
            pd.doc.token_count = toks;
            ++counts.kept;
            counts.kept_tokens += toks;
            kept.push_back(std::move(pd));
        }
        docs = std::move(kept);
    }

    fs::create_directories(config.output_dir);
    std::vector<std::vector<const Document*>> shards(static_cast<size_t>(config.shard_count));
    for (const PendingDoc& pd : docs) {
        size_t shard = static_cast<size_t>(mix64(fnv1a64(pd.doc.id)) %
                                           static_cast<uint64_t>(config.shard_count));
        shards[shard].push_back(&pd.doc);
    }

    RunResult result;
    for (size_t s = 0; s < shards.size(); ++s) {
        std::sort(shards[s].begin(), shards[s].end(), [](const Document* a, const Document* b) {
            return a->dump != b->dump ? a->dump < b->dump : a->id < b->id;
        });
        char name[32];
        std::snprintf(name, sizeof(name), "shard_%04zu.jsonl", s);
        fs::path path = fs::path(config.output_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write shard: " + path.string());
        for (const Document* d : shards[s]) out << to_output_json(*d) << '\n';
        result.shard_paths.push_back(path.string());
        manifest.records_out += static_cast<int64_t>(shards[s].size());
    }
    for (const PendingDoc& pd : docs) manifest.output_tokens += pd.doc.token_count;

    manifest.stages = mb.take();

    {
        std::ostringstream cfg;
        config.filters.save(cfg);
        std::istringstream lines(cfg.str());
        std::string line;
        while (std::getline(lines, line)) {
            size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key(trim(line.substr(0, eq)));
            std::string rest = line.substr(eq + 1);
            size_t hash = rest.find('#');
            if (hash != std::string::npos) rest = rest.substr(0, hash);
            manifest.config_snapshot[key] = std::string(trim(rest));
        }
        manifest.config_snapshot["pipeline.shard_count"] = std::to_string(config.shard_count);
        manifest.config_snapshot["pipeline.edu_threshold"] = std::to_string(config.edu_threshold);
        manifest.config_snapshot["pipeline.target_language"] = config.target_language;
        manifest.config_snapshot["pipeline.dedup_mode"] = manifest.dedup_mode;
        manifest.config_snapshot["pipeline.token_counter"] = manifest.token_counter;
        manifest.config_snapshot["dedup.ngram_size"] =
            std::to_string(config.dedup_params.ngram_size);
        manifest.config_snapshot["dedup.num_hashes"] =
            std::to_string(config.dedup_params.num_hashes);
        manifest.config_snapshot["dedup.buckets"] = std::to_string(config.dedup_params.buckets);
        manifest.config_snapshot["dedup.rows_per_bucket"] =
            std::to_string(config.dedup_params.rows_per_bucket);
    }

    fs::path manifest_path = fs::path(config.output_dir) / "run_manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    mf << manifest.to_json() << '\n';
    result.manifest_path = manifest_path.string();
    result.manifest = std::move(manifest);
    return result;
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["seed"] = seed;
    j["token_counter"] = token_counter;
    j["records_in"] = records_in;
    j["records_out"] = records_out;
    j["output_tokens"] = output_tokens;

    ordered_json stage_list = ordered_json::array();
    for (const StageCounts& s : stages) {
        ordered_json js;
        js["name"] = s.name;
        js["input"] = s.input;
        js["kept"] = s.kept;
        js["dropped"] = s.dropped;
        js["input_tokens"] = s.input_tokens;
        js["kept_tokens"] = s.kept_tokens;
        js["dropped_tokens"] = s.dropped_tokens;
        ordered_json rules = ordered_json::object();
        for (const auto& [rule, count] : s.rule_drops) rules[rule] = count;
        js["rule_drops"] = rules;
        stage_list.push_back(js);
    }
    j["stages"] = stage_list;

    ordered_json dedup;
    dedup["mode"] = dedup_mode;
    ordered_json hist = ordered_json::object();
    for (const auto& [size, count] : dedup_cluster_histogram)
        hist[std::to_string(size)] = count;
    dedup["cluster_size_histogram"] = hist;
    dedup["exempt"] = dedup_exempt;
    dedup["duplicates_removed"] = dedup_duplicates_removed;
    j["dedup"] = dedup;

    ordered_json pii;
    pii["emails_replaced"] = scrub.emails_replaced;
    pii["ips_replaced"] = scrub.ips_replaced;
    pii["ips_skipped_private"] = scrub.ips_skipped_private;
    j["pii"] = pii;

    j["record_errors"] = record_errors;

    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : config_snapshot) cfg[k] = v;
    j["config"] = cfg;

    return j.dump(2);
}

} // namespace curator
