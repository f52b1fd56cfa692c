#include "itts/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "itts/error.hpp"
#include "itts/parallel.hpp"
#include "itts/rng.hpp"

namespace itts {

namespace {

struct NodeStats {
    double sum = 0.0;
    double impurity = 0.0;  // population variance
};

// Mean/impurity from targets in node-sample order.
NodeStats node_stats(const std::vector<double>& target, const std::vector<std::size_t>& samples) {
    NodeStats s;
    for (std::size_t idx : samples) s.sum += target[idx];
    const double m = s.sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (std::size_t idx : samples) {
        const double d = target[idx] - m;
        ss += d * d;
    }
    s.impurity = ss / static_cast<double>(samples.size());
    return s;
}

struct BestSplit {
    bool found = false;
    int column = -1;
    double threshold = 0.0;
    double cost = 0.0;  // SSE_left + SSE_right
};

// Exhaustive scan over all columns and boundaries between adjacent distinct
// sorted values; candidates are midpoints. Strictly-smaller cost wins, so the
// lowest column index and lowest threshold are kept on ties.
BestSplit find_best_split(const FeatureMatrix& matrix, const std::vector<double>& target,
                          const std::vector<std::size_t>& samples) {
    const std::size_t n = samples.size();
    BestSplit best;
    std::vector<std::pair<double, double>> vt(n);  // (value, target)
    for (std::size_t col = 0; col < matrix.n_columns(); ++col) {
        const auto& column = matrix.columns[col];
        for (std::size_t i = 0; i < n; ++i)
            vt[i] = {column[samples[i]], target[samples[i]]};
        std::sort(vt.begin(), vt.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (vt.front().first == vt.back().first) continue;

        double sum_left = 0.0, ssq_left = 0.0;
        double sum_total = 0.0, ssq_total = 0.0;
        for (const auto& [v, y] : vt) {
            sum_total += y;
            ssq_total += y * y;
        }
        for (std::size_t i = 1; i < n; ++i) {
            sum_left += vt[i - 1].second;
            ssq_left += vt[i - 1].second * vt[i - 1].second;
            if (vt[i - 1].first == vt[i].first) continue;
            const double n_left = static_cast<double>(i);
            const double n_right = static_cast<double>(n - i);
            const double sum_right = sum_total - sum_left;
            const double ssq_right = ssq_total - ssq_left;
            const double cost = (ssq_left - sum_left * sum_left / n_left) +
                                (ssq_right - sum_right * sum_right / n_right);
            if (!best.found || cost < best.cost) {
                best.found = true;
                best.column = static_cast<int>(col);
                best.threshold = (vt[i - 1].first + vt[i].first) / 2.0;
                best.cost = cost;
            }
        }
    }
    return best;
}

int build_node(const FeatureMatrix& matrix, const std::vector<double>& target,
               std::vector<std::size_t>&& samples, std::size_t min_samples_split,
               RegressionTree& tree) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const NodeStats stats = node_stats(target, samples);
    {
        TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
        node.n_samples = samples.size();
        node.value = stats.sum / static_cast<double>(samples.size());
        node.impurity = stats.impurity;
    }
    if (samples.size() < min_samples_split || stats.impurity <= 0.0) return index;

    const BestSplit split = find_best_split(matrix, target, samples);
    if (!split.found) return index;

    std::vector<std::size_t> left, right;
    left.reserve(samples.size());
    right.reserve(samples.size());
    for (std::size_t idx : samples) {
        if (matrix.columns[static_cast<std::size_t>(split.column)][idx] <= split.threshold)
            left.push_back(idx);
        else
            right.push_back(idx);
    }
    samples.clear();
    samples.shrink_to_fit();

    const int left_index =
        build_node(matrix, target, std::move(left), min_samples_split, tree);
    const int right_index =
        build_node(matrix, target, std::move(right), min_samples_split, tree);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    node.column = split.column;
    node.threshold = split.threshold;
    node.left = left_index;
    node.right = right_index;
    return index;
}

RegressionTree fit_tree(const FeatureMatrix& matrix, std::vector<std::size_t> samples,
                        std::size_t min_samples_split) {
    RegressionTree tree;
    build_node(matrix, matrix.target, std::move(samples), min_samples_split, tree);
    return tree;
}

}  // namespace

ForestModel fit_forest(const FeatureMatrix& matrix, const ForestParams& params) {
    const std::size_t n = matrix.n_rows;
    if (n < 2) throw TrainingError("need at least 2 rows, got " + std::to_string(n));
    if (params.n_estimators < 1) throw TrainingError("n_estimators must be >= 1");
    bool any_varying = false;
    for (const auto& col : matrix.columns) {
        for (std::size_t r = 1; r < n && !any_varying; ++r)
            if (col[r] != col[0]) any_varying = true;
        if (any_varying) break;
    }
    if (!any_varying) throw TrainingError("all feature columns are constant");

    ForestModel model;
    model.params = params;
    model.feature_names = matrix.feature_names;
    model.feature_columns = matrix.feature_columns;
    model.column_names = matrix.column_names;
    model.trees.resize(static_cast<std::size_t>(params.n_estimators));

    parallel_for(static_cast<std::size_t>(params.n_estimators), params.threads,
                 [&](std::size_t t) {
                     std::vector<std::size_t> samples(n);
                     if (params.bootstrap) {
                         Rng rng(derive_seed(params.seed, "tree", t));
                         for (std::size_t i = 0; i < n; ++i) samples[i] = rng.below(n);
                     } else {
                         std::iota(samples.begin(), samples.end(), 0);
                     }
                     model.trees[t] = fit_tree(matrix, std::move(samples), params.min_samples_split);
                 });
    return model;
}

double predict_row(const ForestModel& model, const FeatureMatrix& matrix, std::size_t row) {
    double sum = 0.0;
    for (const auto& tree : model.trees)
        sum += tree.predict([&](std::size_t col) { return matrix.columns[col][row]; });
    return sum / static_cast<double>(model.trees.size());
}

std::vector<double> predict(const ForestModel& model, const FeatureMatrix& matrix) {
    std::vector<double> out(matrix.n_rows);
    for (std::size_t r = 0; r < matrix.n_rows; ++r) out[r] = predict_row(model, matrix, r);
    return out;
}

double r2_score(std::span<const double> y, std::span<const double> prediction) {
    if (y.size() != prediction.size() || y.empty())
        throw ShapeError("r2 operands", "length mismatch or empty");
    const double m = mean(y);
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - prediction[i];
        const double d = y[i] - m;
        sse += e * e;
        sst += d * d;
    }
    if (sst == 0.0) throw EvalError("constant target in evaluation set");
    return 1.0 - sse / sst;
}

GiniImportance gini_importance(const ForestModel& model) {
    std::vector<double> per_column(model.column_names.size(), 0.0);
    for (const auto& tree : model.trees) {
        const double root_n = static_cast<double>(tree.nodes.front().n_samples);
        for (const auto& node : tree.nodes) {
            if (node.column < 0) continue;
            const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
            const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
            const double nn = static_cast<double>(node.n_samples);
            const double decrease = node.impurity -
                                    (static_cast<double>(l.n_samples) / nn) * l.impurity -
                                    (static_cast<double>(r.n_samples) / nn) * r.impurity;
            per_column[static_cast<std::size_t>(node.column)] += (nn / root_n) * decrease;
        }
    }
    for (auto& v : per_column) v /= static_cast<double>(model.trees.size());

    GiniImportance result;
    result.per_feature.assign(model.feature_names.size(), 0.0);
    for (std::size_t f = 0; f < model.feature_columns.size(); ++f) {
        const auto [begin, end] = model.feature_columns[f];
        for (std::size_t c = begin; c < end; ++c) result.per_feature[f] += per_column[c];
    }
    const double total = std::accumulate(result.per_feature.begin(), result.per_feature.end(), 0.0);
    if (total <= 0.0) {
        result.degenerate = true;  // no splits; report unnormalized zeros
        return result;
    }
    for (auto& v : result.per_feature) v /= total;
    return result;
}

ProbeResult probe_eliminate(const FeatureMatrix& matrix, const ForestParams& params) {
    FeatureMatrix with_probe = matrix;
    Rng rng(derive_seed(params.seed, "probe"));
    std::vector<double> probe(matrix.n_rows);
    for (auto& v : probe) v = rng.uniform();
    with_probe.add_column("random_probe", std::move(probe));

    const ForestModel model = fit_forest(with_probe, params);
    const GiniImportance gini = gini_importance(model);

    ProbeResult result;
    result.probe_gini = gini.per_feature.back();
    for (std::size_t f = 0; f + 1 < gini.per_feature.size(); ++f) {
        result.feature_names.push_back(with_probe.feature_names[f]);
        result.feature_gini.push_back(gini.per_feature[f]);
        if (gini.per_feature[f] > result.probe_gini)
            result.surviving_features.push_back(with_probe.feature_names[f]);
    }
    result.all_eliminated = result.surviving_features.empty();
    return result;
}

PermutationResult permutation_importance(const ForestModel& model, const FeatureMatrix& heldout,
                                         int repetitions, std::uint64_t seed) {
    if (heldout.n_rows < 10)
        throw EvalError("held-out set too small (" + std::to_string(heldout.n_rows) + " rows)");
    if (repetitions < 1) throw EvalError("repetitions must be >= 1");
    if (heldout.feature_names != model.feature_names)
        throw ShapeError("heldout matrix", "feature set differs from model");

    PermutationResult result;
    result.repetitions = repetitions;
    const std::vector<double> baseline_pred = predict(model, heldout);
    result.r2_baseline = r2_score(heldout.target, baseline_pred);

    result.entries.resize(model.feature_names.size());
    parallel_for(model.feature_names.size(), model.params.threads, [&](std::size_t f) {
        const auto [begin, end] = model.feature_columns[f];
        std::vector<double> deltas(static_cast<std::size_t>(repetitions));
        std::vector<double> shuffled_pred(heldout.n_rows);
        for (int rep = 0; rep < repetitions; ++rep) {
            Rng rng(derive_seed(seed, "perm:" + model.feature_names[f],
                                static_cast<std::uint64_t>(rep)));
            const std::vector<std::size_t> perm = rng.permutation(heldout.n_rows);
            for (std::size_t r = 0; r < heldout.n_rows; ++r) {
                shuffled_pred[r] = 0.0;
            }
            for (std::size_t r = 0; r < heldout.n_rows; ++r) {
                const double pred = [&] {
                    double sum = 0.0;
                    for (const auto& tree : model.trees) {
                        sum += tree.predict([&](std::size_t col) {
                            const std::size_t src =
                                (col >= begin && col < end) ? perm[r] : r;
                            return heldout.columns[col][src];
                        });
                    }
                    return sum / static_cast<double>(model.trees.size());
                }();
                shuffled_pred[r] = pred;
            }
            deltas[static_cast<std::size_t>(rep)] =
                result.r2_baseline - r2_score(heldout.target, shuffled_pred);
        }
        PermutationEntry entry;
        entry.feature = model.feature_names[f];
        entry.mean_delta_r2 = mean(deltas);
        entry.std_delta_r2 = population_stddev(deltas);
        result.entries[f] = std::move(entry);
    });
    return result;
}

const char* effect_band(double delta_r2, const RfPipelineParams& params) {
    if (delta_r2 >= params.band_strong) return "***";
    if (delta_r2 >= params.band_medium) return "**";
    if (delta_r2 >= params.band_weak) return "*";
    return "NS";
}

std::vector<std::string> ImportanceReport::top_by_permutation(std::size_t count) const {
    std::vector<const ImportanceEntry*> survivors;
    for (const auto& e : entries)
        if (e.survived) survivors.push_back(&e);
    std::sort(survivors.begin(), survivors.end(), [](const auto* a, const auto* b) {
        if (a->mean_delta_r2 != b->mean_delta_r2) return a->mean_delta_r2 > b->mean_delta_r2;
        return a->feature < b->feature;
    });
    std::vector<std::string> names;
    for (std::size_t i = 0; i < survivors.size() && i < count; ++i)
        names.push_back(survivors[i]->feature);
    return names;
}

ImportanceReport run_rf_pipeline(std::span<const DriftRecord> records,
                                 std::span<const AnnotatedSentence> corpus, int k_target,
                                 const RfPipelineParams& params) {
    // Target lookup d(sentence, n) at k_target.
    std::map<std::pair<std::string, int>, double> targets;
    for (const auto& rec : records)
        if (rec.k == k_target) targets[{rec.sentence_id, rec.n}] = rec.d;
    if (targets.empty())
        throw DependencyError("no drift records at k=" + std::to_string(k_target));

    std::vector<FeatureRow> rows;
    for (const auto& sentence : corpus) {
        std::vector<FeatureRow> sr = extract_feature_rows(sentence, params.neighbor_window);
        for (auto& row : sr) {
            const auto it = targets.find({row.sentence_id, row.n});
            if (it == targets.end())
                throw DependencyError("missing drift record for sentence " + row.sentence_id +
                                      ", n=" + std::to_string(row.n) + " at k=" +
                                      std::to_string(k_target));
            row.target = it->second;
            rows.push_back(std::move(row));
        }
    }
    if (rows.size() < 2) throw TrainingError("feature extraction produced fewer than 2 rows");

    bool constant_target = true;
    for (const auto& row : rows)
        if (row.target != rows.front().target) {
            constant_target = false;
            break;
        }
    if (constant_target)
        throw TrainingError("constant target at k=" + std::to_string(k_target) +
                            " (stage: feature rows)");

    const FeatureMatrix matrix = build_feature_matrix(rows);

    // 80/20 split at sentence granularity.
    std::vector<std::string> ids;
    for (const auto& sentence : corpus) ids.push_back(sentence.sentence.id);
    Rng split_rng(derive_seed(params.seed, "rf_split"));
    split_rng.shuffle(ids);
    std::size_t n_train_sent =
        static_cast<std::size_t>(params.train_fraction * static_cast<double>(ids.size()));
    n_train_sent = std::clamp<std::size_t>(n_train_sent, 1, ids.size() - 1);
    std::map<std::string, bool> in_train;
    for (std::size_t i = 0; i < ids.size(); ++i) in_train[ids[i]] = i < n_train_sent;

    std::vector<std::size_t> train_rows, heldout_rows;
    for (std::size_t r = 0; r < matrix.n_rows; ++r)
        (in_train[matrix.row_sentence[r]] ? train_rows : heldout_rows).push_back(r);
    if (heldout_rows.empty()) throw EvalError("empty held-out split");

    const FeatureMatrix train = matrix.select_rows(train_rows);
    const FeatureMatrix heldout = matrix.select_rows(heldout_rows);

    ForestParams forest_params;
    forest_params.n_estimators = params.n_estimators;
    forest_params.seed = derive_seed(params.seed, "rf_probe_forest");
    forest_params.threads = params.threads;
    const ProbeResult probe = probe_eliminate(train, forest_params);

    ImportanceReport report;
    report.k_target = k_target;
    report.n_rows = matrix.n_rows;
    report.n_train = train.n_rows;
    report.n_heldout = heldout.n_rows;
    report.probe_gini = probe.probe_gini;
    report.all_eliminated = probe.all_eliminated;
    report.params = params;

    std::map<std::string, PermutationEntry> permutation;
    if (!probe.all_eliminated) {
        const FeatureMatrix train_surv = train.select_features(probe.surviving_features);
        ForestParams refit_params = forest_params;
        refit_params.seed = derive_seed(params.seed, "rf_refit_forest");
        const ForestModel refit = fit_forest(train_surv, refit_params);

        const FeatureMatrix eval_surv =
            (params.permutation_on_training ? train : heldout).select_features(probe.surviving_features);
        const PermutationResult perm = permutation_importance(
            refit, eval_surv, params.repetitions, derive_seed(params.seed, "rf_permutation"));
        report.r2_baseline = perm.r2_baseline;
        for (const auto& entry : perm.entries) permutation[entry.feature] = entry;
    }

    for (std::size_t f = 0; f < probe.feature_names.size(); ++f) {
        ImportanceEntry entry;
        entry.feature = probe.feature_names[f];
        entry.gini = probe.feature_gini[f];
        const auto it = permutation.find(entry.feature);
        if (it != permutation.end()) {
            entry.survived = true;
            entry.mean_delta_r2 = it->second.mean_delta_r2;
            entry.std_delta_r2 = it->second.std_delta_r2;
            entry.band = effect_band(entry.mean_delta_r2, params);
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

void write_importance_report(const ImportanceReport& report, const std::string& path) {
    nlohmann::ordered_json j;
    j["k_target"] = report.k_target;
    j["n_rows"] = report.n_rows;
    j["n_train"] = report.n_train;
    j["n_heldout"] = report.n_heldout;
    j["probe_gini"] = report.probe_gini;
    j["all_features_eliminated"] = report.all_eliminated;
    j["r2_baseline"] = report.r2_baseline;
    j["repetitions"] = report.params.repetitions;
    j["bands"] = {{"weak", report.params.band_weak},
                  {"medium", report.params.band_medium},
                  {"strong", report.params.band_strong}};
    j["permutation_set"] = report.params.permutation_on_training ? "training" : "heldout";
    auto& features = j["features"] = nlohmann::ordered_json::array();
    for (const auto& entry : report.entries) {
        nlohmann::ordered_json je;
        je["feature"] = entry.feature;
        je["gini"] = entry.gini;
        je["survived_probe"] = entry.survived;
        if (entry.survived) {
            je["mean_delta_r2"] = entry.mean_delta_r2;
            je["std_delta_r2"] = entry.std_delta_r2;
            je["band"] = entry.band;
        }
        features.push_back(std::move(je));
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace itts
