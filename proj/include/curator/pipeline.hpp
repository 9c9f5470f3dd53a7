#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "curator/document.hpp"
#include "curator/minhash.hpp"
#include "curator/pii_scrub.hpp"
#include "curator/quality_filters.hpp"
#include "curator/tokenizer.hpp"

namespace curator {

enum class InputFormat { warc, wet, jsonl };

enum class DedupMode {
    none,
    per_snapshot,
    global_iterative,
    url,
    line_plain,
    line_min_words,
    line_span3,
};

std::string_view to_string(DedupMode m);
std::optional<DedupMode> dedup_mode_from_string(std::string_view s);

// Stage order is fixed: url_filter, extract, language, gopher_quality,
// gopher_repetition, dedup, c4, fineweb_custom, pii, score_gate.
// Toggles only enable or disable a stage.
struct StageToggles {
    bool url_filter = true;
    bool extract = true;
    bool language = true;
    bool gopher_quality = true;
    bool gopher_repetition = true;
    DedupMode dedup = DedupMode::per_snapshot;
    bool c4 = true;
    bool fineweb_custom = true;
    bool pii = true;
    bool score_gate = false;
};

struct PipelineConfig {
    std::vector<std::string> inputs;
    InputFormat format = InputFormat::jsonl;
    std::string output_dir;

    StageToggles stages;
    FilterConfig filters;
    DedupParams dedup_params;

    int edu_threshold = 3;
    std::string target_language = "en";

    TokenCounterKind token_counter = TokenCounterKind::whitespace;
    std::string bpe_merges_path;

    int shard_count = 1;
    uint64_t seed = 0;

    std::string blocklist_path;
    std::string lang_model_path;  // trained LIDM1 model
    std::string lang_scores_path; // "record_id<TAB>label<TAB>score"
    std::string edu_scores_path;  // "id<TAB>score"
    std::string spill_dir;        // signature/posting spill files, optional
    std::string dump_id;          // assigned when the input carries none
};

struct StageCounts {
    std::string name;
    int64_t input = 0;
    int64_t kept = 0;
    int64_t dropped = 0;
    int64_t input_tokens = 0;
    int64_t kept_tokens = 0;
    int64_t dropped_tokens = 0;
    std::map<std::string, int64_t> rule_drops;
};

struct RunManifest {
    uint64_t seed = 0;
    std::string token_counter;
    std::vector<StageCounts> stages;
    std::string dedup_mode;
    std::map<size_t, int64_t> dedup_cluster_histogram;
    int64_t dedup_exempt = 0;
    int64_t dedup_duplicates_removed = 0;
    ScrubReport scrub;
    int64_t records_in = 0;
    int64_t records_out = 0;
    int64_t output_tokens = 0;
    std::vector<std::string> record_errors;
    std::map<std::string, std::string> config_snapshot;

    std::string to_json() const; // single deterministic JSON document
};

struct RunResult {
    std::vector<std::string> shard_paths;
    std::string manifest_path;
    RunManifest manifest;
};

// Runs the full stage pipeline over the configured inputs and writes
// JSONL shards plus run_manifest.json under output_dir. Output shards are
// sorted by (dump, id); shard assignment hashes the record id, so the union
// of shards does not depend on shard_count.
RunResult run_pipeline(const PipelineConfig& config);

// Datasheet-schema serialization: fixed key order
// text,id,dump,url,date,file_path,language,language_score,token_count.
std::string to_output_json(const Document& doc);
Document document_from_json(const std::string& line);

// Round-half-up integer rounding used for decimal educational scores.
int round_score(double score);

// "id<TAB>score" lines; decimal scores allowed.
std::unordered_map<std::string, double> read_edu_scores(std::istream& in);

// Keep documents whose score rounds to >= threshold; unscored ids drop with
// rule "unscored". counts, when non-null, receives the stage accounting
// (record units only).
std::vector<Document> score_gate(std::vector<Document> docs,
                                 const std::unordered_map<std::string, double>& scores,
                                 int threshold, StageCounts* counts = nullptr);

int64_t count_tokens(std::string_view text, const TokenCounter& counter);

} // namespace curator
