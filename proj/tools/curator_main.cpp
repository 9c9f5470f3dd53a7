#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "curator/bias_audit.hpp"
#include "curator/language_id.hpp"
#include "curator/minhash.hpp"
#include "curator/pii_scrub.hpp"
#include "curator/pipeline.hpp"
#include "curator/record_io.hpp"
#include "curator/threshold_lab.hpp"

namespace {

using namespace curator;

std::vector<Document> read_jsonl_corpus(const std::vector<std::string>& paths) {
    std::vector<Document> docs;
    for (const std::string& path : paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            docs.push_back(document_from_json(line));
        }
    }
    return docs;
}

int cmd_run(const PipelineConfig& config) {
    RunResult result = run_pipeline(config);
    std::cout << "records in:  " << result.manifest.records_in << "\n";
    for (const StageCounts& s : result.manifest.stages)
        std::cout << "  " << s.name << ": kept " << s.kept << ", dropped " << s.dropped << "\n";
    std::cout << "records out: " << result.manifest.records_out << " ("
              << result.manifest.output_tokens << " tokens) in " << result.shard_paths.size()
              << " shard(s)\n";
    std::cout << "manifest:    " << result.manifest_path << "\n";
    return 0;
}

int cmd_dedup_sim(const DuplicateSimParams& params) {
    DuplicateSimResult r = simulate_duplicate_distribution(params);
    std::cout << "universe: " << r.unique_docs << " unique docs x " << params.num_snapshots
              << " snapshots = " << r.total_items << " items\n";
    std::cout << "sampled:  " << r.sampled_items << " items, unique fraction "
              << r.unique_fraction << "\n";
    std::cout << "multiplicity\tsampled_docs\texpected\n";
    for (const auto& [mult, count] : r.histogram) {
        auto it = r.expected.find(mult);
        std::cout << mult << '\t' << count << '\t' << (it == r.expected.end() ? 0.0 : it->second)
                  << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"web corpus curation pipeline"};
    app.require_subcommand(1);

    // ---- run ----
    PipelineConfig config;
    std::string format = "jsonl";
    std::string dedup_mode = "per_snapshot";
    std::string token_counter = "whitespace";
    std::string filter_config_path;
    std::vector<std::string> disable;
    bool score_gate_on = false;

    CLI::App* run = app.add_subcommand("run", "run the full curation pipeline");
    run->add_option("--input,-i", config.inputs, "input file(s)")->required();
    run->add_option("--format,-f", format, "warc | wet | jsonl")
        ->check(CLI::IsMember({"warc", "wet", "jsonl"}));
    run->add_option("--output,-o", config.output_dir, "output directory")->required();
    run->add_option("--dedup", dedup_mode,
                    "none | per_snapshot | global_iterative | url | line_plain | "
                    "line_min_words | line_span3");
    run->add_option("--disable", disable,
                    "stages to disable (url_filter, extract, language, gopher_quality, "
                    "gopher_repetition, c4, fineweb_custom, pii)");
    run->add_flag("--score-gate", score_gate_on, "enable the educational score gate");
    run->add_option("--edu-scores", config.edu_scores_path, "id<TAB>score file for the gate");
    run->add_option("--edu-threshold", config.edu_threshold, "minimum educational score");
    run->add_option("--blocklist", config.blocklist_path, "URL blocklist file");
    run->add_option("--lang-model", config.lang_model_path, "trained language model (LIDM1)");
    run->add_option("--lang-scores", config.lang_scores_path,
                    "record_id<TAB>label<TAB>score file");
    run->add_option("--filter-config", filter_config_path,
                    "filter threshold file; its values take precedence over flags");
    run->add_option("--lang-threshold", config.filters.lang_threshold, "language score gate");
    run->add_option("--token-counter", token_counter, "whitespace | bpe")
        ->check(CLI::IsMember({"whitespace", "bpe"}));
    run->add_option("--bpe-merges", config.bpe_merges_path, "merges file for bpe counting");
    run->add_option("--shards", config.shard_count, "output shard count");
    run->add_option("--seed", config.seed, "run seed for all seeded behavior");
    run->add_option("--dump", config.dump_id, "dump id for inputs that carry none");
    run->add_option("--spill-dir", config.spill_dir,
                    "directory for dedup spill files (default: env CURATOR_SPILL_DIR)");

    // ---- dedup-sim ----
    DuplicateSimParams sim;
    CLI::App* dsim = app.add_subcommand("dedup-sim", "duplicate-distribution simulator");
    dsim->add_option("--snapshots", sim.num_snapshots, "number of identical snapshots");
    dsim->add_option("--tokens-per-snapshot", sim.tokens_per_snapshot, "tokens per snapshot");
    dsim->add_option("--tokens-per-doc", sim.tokens_per_doc, "tokens per document");
    dsim->add_option("--sample-tokens", sim.sample_tokens, "sampled token budget")->required();
    dsim->add_option("--seed", sim.seed, "sampling seed");

    // ---- threshold-lab ----
    std::string high_path, low_path, metric = "lines_end_punct_fraction";
    Binning binning;
    double min_gap = 0.01;
    std::string binning_kind = "fixed";
    CLI::App* lab = app.add_subcommand("threshold-lab",
                                       "compare metric histograms and propose thresholds");
    lab->add_option("--high", high_path, "higher-quality corpus (jsonl)")->required();
    lab->add_option("--low", low_path, "lower-quality corpus (jsonl)")->required();
    lab->add_option("--metric", metric, "DocumentMetrics field name");
    lab->add_option("--bins", binning.bins, "bin count");
    lab->add_option("--lo", binning.lo, "histogram range low");
    lab->add_option("--hi", binning.hi, "histogram range high");
    lab->add_option("--binning", binning_kind, "fixed | quantile")
        ->check(CLI::IsMember({"fixed", "quantile"}));
    lab->add_option("--min-gap", min_gap, "minimum density excess per bin");

    // ---- bias-audit ----
    std::vector<std::string> audit_inputs;
    std::vector<std::string> terms;
    size_t top_k = 25;
    bool counts_only = false;
    CLI::App* audit = app.add_subcommand("bias-audit", "subgroup term counts and TF-IDF skews");
    audit->add_option("--input,-i", audit_inputs, "corpus (jsonl)")->required();
    audit->add_option("--terms", terms, "lowercase subgroup terms")->required();
    audit->add_option("--top", top_k, "rows per term (0 = all)");
    audit->add_flag("--counts-only", counts_only, "only print the term distribution");

    // ---- pii-scan ----
    std::vector<std::string> pii_inputs;
    std::string pii_output;
    CLI::App* pii = app.add_subcommand("pii-scan", "anonymize emails and public IPv4 addresses");
    pii->add_option("--input,-i", pii_inputs, "corpus (jsonl)")->required();
    pii->add_option("--output,-o", pii_output, "scrubbed jsonl (omit for a dry run)");

    // ---- warc-cat ----
    std::string warc_path;
    bool show_payload = false;
    int64_t limit = -1;
    CLI::App* wcat = app.add_subcommand("warc-cat", "list records in a WARC/WET file");
    wcat->add_option("input", warc_path, "archive path")->required();
    wcat->add_flag("--payload", show_payload, "print payloads");
    wcat->add_option("--limit", limit, "stop after N records");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            config.format = format == "warc"   ? InputFormat::warc
                            : format == "wet"  ? InputFormat::wet
                                               : InputFormat::jsonl;
            auto mode = dedup_mode_from_string(dedup_mode);
            if (!mode) throw std::runtime_error("unknown dedup mode: " + dedup_mode);
            config.stages.dedup = *mode;
            config.stages.score_gate = score_gate_on;
            config.token_counter =
                token_counter == "bpe" ? TokenCounterKind::bpe : TokenCounterKind::whitespace;
            for (const std::string& s : disable) {
                if (s == "url_filter") config.stages.url_filter = false;
                else if (s == "extract") config.stages.extract = false;
                else if (s == "language") config.stages.language = false;
                else if (s == "gopher_quality") config.stages.gopher_quality = false;
                else if (s == "gopher_repetition") config.stages.gopher_repetition = false;
                else if (s == "c4") config.stages.c4 = false;
                else if (s == "fineweb_custom") config.stages.fineweb_custom = false;
                else if (s == "pii") config.stages.pii = false;
                else throw std::runtime_error("unknown stage: " + s);
            }
            if (config.spill_dir.empty()) {
                const char* env = std::getenv("CURATOR_SPILL_DIR");
                if (env) config.spill_dir = env;
            }
            // the config file wins over any individual threshold flags
            if (!filter_config_path.empty()) {
                std::ifstream fc(filter_config_path);
                if (!fc) throw std::runtime_error("cannot open " + filter_config_path);
                config.filters = FilterConfig::load(fc);
            }
            return cmd_run(config);
        }

        if (dsim->parsed()) return cmd_dedup_sim(sim);

        if (lab->parsed()) {
            binning.kind = binning_kind == "quantile" ? Binning::Kind::quantile
                                                      : Binning::Kind::fixed_width;
            auto metrics_of = [](const std::string& path) {
                std::vector<DocumentMetrics> ms;
                for (const Document& d : read_jsonl_corpus({path}))
                    ms.push_back(compute_metrics(d.text));
                return ms;
            };
            std::vector<DocumentMetrics> high = metrics_of(high_path);
            std::vector<DocumentMetrics> low = metrics_of(low_path);
            Histogram hh = collect_histogram(high, metric, binning);
            Histogram hl = collect_histogram(low, metric, hh.bin_edges);
            ThresholdReport report = suggest_thresholds(hh, hl, min_gap);
            write_threshold_report(std::cout, metric, report);
            return 0;
        }

        if (audit->parsed()) {
            std::vector<Document> corpus = read_jsonl_corpus(audit_inputs);
            std::map<std::string, int64_t> counts = term_distribution(corpus, terms);
            std::cout << "term\tcount\n";
            for (const auto& [term, count] : counts) std::cout << term << '\t' << count << '\n';
            if (!counts_only) {
                for (const AssociationTable& t : tfidf_association(corpus, terms)) {
                    std::cout << '\n';
                    write_association_table(std::cout, t, top_k);
                }
            }
            return 0;
        }

        if (pii->parsed()) {
            std::vector<Document> corpus = read_jsonl_corpus(pii_inputs);
            ScrubReport total;
            std::ofstream out;
            if (!pii_output.empty()) {
                out.open(pii_output, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + pii_output);
            }
            for (Document& d : corpus) {
                auto [text, report] = anonymize(d.text);
                total.emails_replaced += report.emails_replaced;
                total.ips_replaced += report.ips_replaced;
                total.ips_skipped_private += report.ips_skipped_private;
                if (out.is_open()) {
                    d.text = std::move(text);
                    out << to_output_json(d) << '\n';
                }
            }
            std::cout << "emails replaced:     " << total.emails_replaced << '\n'
                      << "ips replaced:        " << total.ips_replaced << '\n'
                      << "private ips skipped: " << total.ips_skipped_private << '\n';
            return 0;
        }

        if (wcat->parsed()) {
            std::ifstream in(warc_path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open " + warc_path);
            WarcReader::Options opts;
            opts.source_path = warc_path;
            WarcReader reader(in, opts);
            int64_t shown = 0;
            while (auto item = reader.next()) {
                if (limit >= 0 && shown >= limit) break;
                ++shown;
                if (std::holds_alternative<RecordError>(*item)) {
                    const RecordError& e = std::get<RecordError>(*item);
                    std::cout << "@" << e.byte_offset << " ERROR: " << e.message << '\n';
                    continue;
                }
                const RawRecord& r = std::get<RawRecord>(*item);
                std::cout << "@" << r.byte_offset << ' ' << to_string(r.record_type) << ' '
                          << r.record_id << ' ' << r.target_uri.value_or("-") << " ("
                          << r.payload.size() << " bytes)\n";
                if (show_payload) std::cout << r.payload << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
