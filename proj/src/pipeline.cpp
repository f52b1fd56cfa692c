#include "itts/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "itts/csv.hpp"
#include "itts/digest.hpp"
#include "itts/error.hpp"
#include "itts/parallel.hpp"
#include "itts/rng.hpp"

namespace itts {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
    if (corpus_path.empty()) throw ConfigError("corpus path required");
    if (out_dir.empty()) throw ConfigError("output directory required");
    if (k_max < 0) throw ConfigError("k_max must be >= 0");
    for (int k : k_targets)
        if (k < 0 || k > k_max) throw ConfigError("k_targets must lie in 0..k_max");
    if (crossfade_ms < 0.0) throw ConfigError("crossfade must be >= 0");
    encoder.validate();
}

namespace {

EncoderConfig resolved_encoder(const ExperimentConfig& config) {
    EncoderConfig enc = config.encoder;
    enc.seed = derive_seed(config.master_seed, "weights");
    return enc;
}

EncoderWeights resolve_weights(const ExperimentConfig& config, const EncoderConfig& enc) {
    if (!config.weights_path.empty()) return load_weights(config.weights_path, enc);
    return init_weights(enc);
}

nlohmann::ordered_json config_snapshot(const ExperimentConfig& config) {
    const EncoderConfig enc = resolved_encoder(config);
    nlohmann::ordered_json j;
    j["master_seed"] = config.master_seed;
    j["corpus_path"] = config.corpus_path;
    j["weights_path"] = config.weights_path;
    j["encoder"] = {{"vocab_size", enc.char_vocab.size()},
                    {"embed_dim", enc.embed_dim},
                    {"conv", {{enc.conv[0].kernel_width, enc.conv[0].channels},
                              {enc.conv[1].kernel_width, enc.conv[1].channels},
                              {enc.conv[2].kernel_width, enc.conv[2].channels}}},
                    {"hidden_dim", enc.hidden_dim},
                    {"seed", enc.seed}};
    j["k_max"] = config.k_max;
    j["k_targets"] = config.k_targets;
    j["crossfade_ms"] = config.crossfade_ms;
    j["alpha"] = config.alpha;
    j["forward_cache"] = config.forward_cache;
    j["rf"] = {{"n_estimators", config.rf.n_estimators},
               {"repetitions", config.rf.repetitions},
               {"train_fraction", config.rf.train_fraction},
               {"permutation_on_training", config.rf.permutation_on_training},
               {"neighbor_window", config.rf.neighbor_window},
               {"bands", {config.rf.band_weak, config.rf.band_medium, config.rf.band_strong}}};
    j["toy"] = {{"sample_rate", config.toy.sample_rate},
                {"base_ms", config.toy.base_ms},
                {"per_char_ms", config.toy.per_char_ms},
                {"freq_lo_hz", config.toy.freq_lo_hz},
                {"freq_span_hz", config.toy.freq_span_hz},
                {"amplitude", config.toy.amplitude},
                {"ramp_ms", config.toy.ramp_ms}};
    return j;
}

StageOutput make_output(const ExperimentConfig& config, const std::string& rel_path) {
    return {rel_path, sha256_file((fs::path(config.out_dir) / rel_path).string())};
}

}  // namespace

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["artifact"] = "ittslab";
    j["version"] = kArtifactVersion;
    j["stage"] = manifest.stage;
    j["config"] = nlohmann::ordered_json::parse(manifest.config_json);
    auto& outputs = j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& out : manifest.outputs)
        outputs.push_back({{"path", out.path}, {"sha256", out.sha256}});
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const ExperimentConfig& config) {
    const fs::path dir = fs::path(config.out_dir) / manifest.stage;
    fs::create_directories(dir);
    std::ofstream out(dir / "manifest.json");
    if (!out) throw DataError("cannot write manifest");
    out << manifest_to_json(manifest);
}

void write_drift_csv(std::span<const DriftRecord> records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "sentence_id,n,k,category,d\n";
    for (const auto& rec : records)
        out << rec.sentence_id << ',' << rec.n << ',' << rec.k << ',' << to_string(rec.category)
            << ',' << csv::format(rec.d) << '\n';
}

std::vector<DriftRecord> read_drift_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DependencyError("cannot open drift records: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "sentence_id,n,k,category,d")
        throw ParseError(1, "bad drift.csv header");
    std::vector<DriftRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 5) throw ParseError(line_no, "expected 5 fields");
        DriftRecord rec;
        rec.sentence_id = fields[0];
        rec.n = static_cast<int>(csv::parse_int(fields[1], line_no));
        rec.k = static_cast<int>(csv::parse_int(fields[2], line_no));
        if (fields[3] == "punctuation") rec.category = TokenCategory::Punctuation;
        else if (fields[3] == "space") rec.category = TokenCategory::Space;
        else if (fields[3] == "function_word") rec.category = TokenCategory::FunctionWord;
        else if (fields[3] == "content_word") rec.category = TokenCategory::ContentWord;
        else throw ParseError(line_no, "unknown category '" + fields[3] + "'");
        rec.d = csv::parse_double(fields[4], line_no);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_drift_summary_csv(const DriftSummary& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "k,category,mean,std,count,closeness_ratio,flags\n";
    static const TokenCategory cats[] = {TokenCategory::Punctuation, TokenCategory::Space,
                                         TokenCategory::FunctionWord, TokenCategory::ContentWord};
    for (int k = 0; k <= summary.k_max; ++k) {
        const auto ki = static_cast<std::size_t>(k);
        for (TokenCategory cat : cats) {
            const SummaryCell& cell = summary.per_category[ki][static_cast<std::size_t>(cat)];
            out << k << ',' << to_string(cat) << ',' << csv::format(cell.mean) << ','
                << csv::format(cell.stddev) << ',' << cell.count << ",,\n";
        }
        const SummaryCell& cell = summary.overall[ki];
        out << k << ",all," << csv::format(cell.mean) << ',' << csv::format(cell.stddev) << ','
            << cell.count << ',' << csv::format(summary.closeness[ki]) << ','
            << (summary.closeness_degenerate ? "degenerate_r" : "") << '\n';
    }
}

void write_lookahead_tests_csv(std::span<const LookaheadTest> tests, double alpha,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "k_low,k_high,t,df,p,degenerate,alpha,significant\n";
    for (const auto& test : tests)
        out << test.k_low << ',' << test.k_high << ',' << csv::format(test.result.t) << ','
            << csv::format(test.result.df) << ',' << csv::format(test.result.p) << ','
            << (test.result.degenerate ? 1 : 0) << ',' << csv::format(alpha) << ','
            << (test.result.p < alpha ? 1 : 0) << '\n';
}

RunManifest run_drift_experiment(const ExperimentConfig& config) {
    config.validate();
    const std::vector<AnnotatedSentence> corpus = load_annotated_corpus(config.corpus_path);
    if (corpus.empty()) throw EmptyData("corpus has no sentences");
    const EncoderConfig enc = resolved_encoder(config);
    const EncoderWeights weights = resolve_weights(config, enc);

    // Per-sentence blocks computed in parallel, concatenated in corpus order.
    std::vector<std::vector<DriftRecord>> blocks(corpus.size());
    EncodeOptions options;
    options.forward_cache = config.forward_cache;
    parallel_for(corpus.size(), config.threads, [&](std::size_t i) {
        const PrefixTable table =
            encode_all_prefixes(corpus[i].sentence, weights, enc, options);
        blocks[i] = compute_drift_all_k(corpus[i].sentence, corpus[i].tokens, config.k_max, table);
    });
    std::vector<DriftRecord> records;
    for (auto& block : blocks)
        records.insert(records.end(), std::make_move_iterator(block.begin()),
                       std::make_move_iterator(block.end()));

    const DriftSummary summary = summarize(records, config.k_max);
    const std::vector<LookaheadTest> tests = consecutive_lookahead_tests(records, config.k_max);

    const fs::path dir = fs::path(config.out_dir) / "drift";
    fs::create_directories(dir);
    write_drift_csv(records, (dir / "drift.csv").string());
    write_drift_summary_csv(summary, (dir / "summary.csv").string());
    write_lookahead_tests_csv(tests, config.alpha, (dir / "ttests.csv").string());

    RunManifest manifest;
    manifest.stage = "drift";
    manifest.config_json = config_snapshot(config).dump();
    manifest.outputs = {make_output(config, "drift/drift.csv"),
                        make_output(config, "drift/summary.csv"),
                        make_output(config, "drift/ttests.csv")};
    write_manifest(manifest, config);
    return manifest;
}

RunManifest run_rf_experiment(const ExperimentConfig& config) {
    config.validate();
    const fs::path drift_csv = fs::path(config.out_dir) / "drift" / "drift.csv";
    if (!fs::exists(drift_csv))
        throw DependencyError("drift stage must run before rf (" + drift_csv.string() + ")");
    const std::vector<DriftRecord> records = read_drift_csv(drift_csv.string());
    const std::vector<AnnotatedSentence> corpus = load_annotated_corpus(config.corpus_path);

    const fs::path dir = fs::path(config.out_dir) / "rf";
    fs::create_directories(dir);

    RunManifest manifest;
    manifest.stage = "rf";
    manifest.config_json = config_snapshot(config).dump();
    for (int k_target : config.k_targets) {
        RfPipelineParams params = config.rf;
        params.seed = derive_seed(config.master_seed, "rf", static_cast<std::uint64_t>(k_target));
        params.threads = config.threads;
        const ImportanceReport report = run_rf_pipeline(records, corpus, k_target, params);
        const std::string report_rel = "rf/importance_k" + std::to_string(k_target) + ".json";
        write_importance_report(report, (fs::path(config.out_dir) / report_rel).string());
        manifest.outputs.push_back(make_output(config, report_rel));
    }
    write_manifest(manifest, config);
    return manifest;
}

RunManifest run_assembly(const ExperimentConfig& config, const std::string& sentence_id, int k) {
    config.validate();
    if (k < 0) throw ConfigError("k must be >= 0");
    const std::vector<AnnotatedSentence> corpus = load_annotated_corpus(config.corpus_path);
    const AnnotatedSentence* sentence = nullptr;
    for (const auto& as : corpus)
        if (as.sentence.id == sentence_id) sentence = &as;
    if (!sentence) throw NotFound("sentence '" + sentence_id + "'");

    const EncoderConfig enc = resolved_encoder(config);
    const EncoderWeights weights = resolve_weights(config, enc);

    const AssemblyResult incremental =
        assemble_incremental(sentence->sentence, k, weights, enc, config.crossfade_ms, config.toy);
    const auto [offline_wav, offline_alignment] =
        offline_synthesize(sentence->sentence, weights, enc, config.toy);

    const fs::path dir = fs::path(config.out_dir) / "audio";
    fs::create_directories(dir);
    const std::string base = sentence_id + "_k" + std::to_string(k);
    write_wav(incremental.waveform, (dir / (base + ".wav")).string());
    write_alignment(incremental.alignment, (dir / (base + "_alignment.csv")).string());
    write_assembly_report(incremental, (dir / (base + "_report.csv")).string());
    write_wav(offline_wav, (dir / (sentence_id + "_offline.wav")).string());
    write_alignment(offline_alignment, (dir / (sentence_id + "_offline_alignment.csv")).string());

    RunManifest manifest;
    manifest.stage = "audio";
    manifest.config_json = config_snapshot(config).dump();
    manifest.outputs = {make_output(config, "audio/" + base + ".wav"),
                        make_output(config, "audio/" + base + "_alignment.csv"),
                        make_output(config, "audio/" + base + "_report.csv"),
                        make_output(config, "audio/" + sentence_id + "_offline.wav"),
                        make_output(config, "audio/" + sentence_id + "_offline_alignment.csv")};
    write_manifest(manifest, config);
    return manifest;
}

}  // namespace itts
