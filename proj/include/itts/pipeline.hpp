#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itts/assembler.hpp"
#include "itts/drift.hpp"
#include "itts/encoder.hpp"
#include "itts/forest.hpp"

namespace itts {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct ExperimentConfig {
    std::string corpus_path;
    std::string weights_path;  // load when set; otherwise init from master seed
    EncoderConfig encoder;     // seed is overwritten with derive(master, "weights")
    int k_max = 8;
    std::vector<int> k_targets = {0, 2};
    double crossfade_ms = 5.0;
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    std::string out_dir;
    int threads = 0;  // never part of the manifest; results are thread-count independent
    bool forward_cache = false;
    RfPipelineParams rf;
    ToySynthConfig toy;

    void validate() const;
};

struct StageOutput {
    std::string path;  // relative to out_dir
    std::string sha256;
};

struct RunManifest {
    std::string stage;
    std::string config_json;  // deterministic snapshot
    std::vector<StageOutput> outputs;
};

// Serializes to <out_dir>/<stage>/manifest.json.
void write_manifest(const RunManifest& manifest, const ExperimentConfig& config);
std::string manifest_to_json(const RunManifest& manifest);

// Corpus -> per-(sentence, n, k) drift records -> drift.csv, summary.csv,
// ttests.csv under <out_dir>/drift/. Deterministic under master_seed.
RunManifest run_drift_experiment(const ExperimentConfig& config);

// Reads drift.csv, runs the RF procedure per k_target, writes
// importance_k<k>.json and features_k<k>.csv under <out_dir>/rf/.
RunManifest run_rf_experiment(const ExperimentConfig& config);

// Incremental and offline WAVs plus assembly report for one sentence under
// <out_dir>/audio/.
RunManifest run_assembly(const ExperimentConfig& config, const std::string& sentence_id, int k);

// drift.csv round-trip used by the rf stage and tests.
void write_drift_csv(std::span<const DriftRecord> records, const std::string& path);
std::vector<DriftRecord> read_drift_csv(const std::string& path);

void write_drift_summary_csv(const DriftSummary& summary, const std::string& path);
void write_lookahead_tests_csv(std::span<const LookaheadTest> tests, double alpha,
                               const std::string& path);

}  // namespace itts
