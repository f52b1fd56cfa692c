#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "itts/drift.hpp"
#include "itts/features.hpp"

namespace itts {

// CART regression node. Interior nodes route rows by column <= threshold;
// leaves carry the mean target of their samples.
struct TreeNode {
    int column = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    double impurity = 0.0;  // population variance of node targets
    std::size_t n_samples = 0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    template <typename RowAccessor>
    double predict(RowAccessor&& value_at) const {
        int idx = 0;
        while (nodes[static_cast<std::size_t>(idx)].column >= 0) {
            const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
            idx = value_at(static_cast<std::size_t>(node.column)) <= node.threshold ? node.left
                                                                                    : node.right;
        }
        return nodes[static_cast<std::size_t>(idx)].value;
    }
};

struct ForestParams {
    int n_estimators = 100;
    std::uint64_t seed = 0;
    bool bootstrap = true;  // per-tree resample of dataset size, with replacement
    std::size_t min_samples_split = 2;
    int threads = 0;  // 0 = hardware concurrency
};

struct ForestModel {
    ForestParams params;
    std::vector<std::string> feature_names;
    std::vector<std::pair<std::size_t, std::size_t>> feature_columns;
    std::vector<std::string> column_names;
    std::vector<RegressionTree> trees;
};

// MSE-criterion CART forest: all columns considered at each split, grown
// until pure or below min_samples_split; tie-break lowest column index then
// lowest threshold. Deterministic under params.seed.
ForestModel fit_forest(const FeatureMatrix& matrix, const ForestParams& params);

double predict_row(const ForestModel& model, const FeatureMatrix& matrix, std::size_t row);
std::vector<double> predict(const ForestModel& model, const FeatureMatrix& matrix);

// 1 - SSE/SST against the sample mean of y.
double r2_score(std::span<const double> y, std::span<const double> prediction);

struct GiniImportance {
    std::vector<double> per_feature;  // original-feature granularity, sums to 1
    bool degenerate = false;          // no split anywhere; values left at 0
};

// Mean over trees of node-weighted impurity decrease, summed over each
// original feature's columns, normalized to sum 1.
GiniImportance gini_importance(const ForestModel& model);

struct ProbeResult {
    std::vector<std::string> surviving_features;
    double probe_gini = 0.0;
    bool all_eliminated = false;
    std::vector<std::string> feature_names;  // excluding the probe
    std::vector<double> feature_gini;
};

// Appends a seeded uniform[0,1) probe column, fits, and drops every feature
// whose Gini importance is <= the probe's.
ProbeResult probe_eliminate(const FeatureMatrix& matrix, const ForestParams& params);

struct PermutationEntry {
    std::string feature;
    double mean_delta_r2 = 0.0;
    double std_delta_r2 = 0.0;
};

struct PermutationResult {
    double r2_baseline = 0.0;
    int repetitions = 0;
    std::vector<PermutationEntry> entries;
};

// Drop in held-out R^2 over seeded joint shuffles of each feature's columns.
PermutationResult permutation_importance(const ForestModel& model, const FeatureMatrix& heldout,
                                         int repetitions, std::uint64_t seed);

struct RfPipelineParams {
    int n_estimators = 100;
    std::uint64_t seed = 0;
    int repetitions = 10;
    double train_fraction = 0.8;  // seeded split at sentence granularity
    bool permutation_on_training = false;
    int neighbor_window = kDefaultNeighborWindow;
    int threads = 0;
    // Effect-size bands on mean dR^2; declared conventions, reported raw too.
    double band_weak = 0.01;
    double band_medium = 0.05;
    double band_strong = 0.15;
};

const char* effect_band(double delta_r2, const RfPipelineParams& params);

struct ImportanceEntry {
    std::string feature;
    double gini = 0.0;
    bool survived = false;
    double mean_delta_r2 = 0.0;
    double std_delta_r2 = 0.0;
    std::string band;  // NS / * / ** / ***, survivors only
};

struct ImportanceReport {
    int k_target = 0;
    std::size_t n_rows = 0;
    std::size_t n_train = 0;
    std::size_t n_heldout = 0;
    double probe_gini = 0.0;
    bool all_eliminated = false;
    double r2_baseline = 0.0;
    std::vector<ImportanceEntry> entries;
    RfPipelineParams params;

    std::vector<std::string> top_by_permutation(std::size_t count) const;
};

// Full procedure: feature rows with target d(n, k_target), probe elimination
// on the training split, refit on survivors, permutation importance on the
// held-out split.
ImportanceReport run_rf_pipeline(std::span<const DriftRecord> records,
                                 std::span<const AnnotatedSentence> corpus, int k_target,
                                 const RfPipelineParams& params);

void write_importance_report(const ImportanceReport& report, const std::string& path);

}  // namespace itts
