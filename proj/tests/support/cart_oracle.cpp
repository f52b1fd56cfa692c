#include "cart_oracle.hpp"

#include <algorithm>

namespace itts::testing {

namespace {

double node_mean(const std::vector<double>& target, const std::vector<std::size_t>& samples) {
    double sum = 0.0;
    for (std::size_t idx : samples) sum += target[idx];
    return sum / static_cast<double>(samples.size());
}

double node_impurity(const std::vector<double>& target, const std::vector<std::size_t>& samples) {
    const double m = node_mean(target, samples);
    double ss = 0.0;
    for (std::size_t idx : samples) {
        const double d = target[idx] - m;
        ss += d * d;
    }
    return ss / static_cast<double>(samples.size());
}

double partition_sse(const FeatureMatrix& matrix, const std::vector<std::size_t>& samples,
                     std::size_t col, double threshold, bool left_side) {
    std::vector<std::size_t> part;
    for (std::size_t idx : samples)
        if ((matrix.columns[col][idx] <= threshold) == left_side) part.push_back(idx);
    if (part.empty()) return 0.0;
    const double m = node_mean(matrix.target, part);
    double sse = 0.0;
    for (std::size_t idx : part) {
        const double d = matrix.target[idx] - m;
        sse += d * d;
    }
    return sse;
}

int oracle_build(const FeatureMatrix& matrix, std::vector<std::size_t> samples,
                 std::size_t min_samples_split, RegressionTree& tree) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
        TreeNode& node = tree.nodes.back();
        node.n_samples = samples.size();
        node.value = node_mean(matrix.target, samples);
        node.impurity = node_impurity(matrix.target, samples);
    }
    if (samples.size() < min_samples_split ||
        tree.nodes[static_cast<std::size_t>(index)].impurity <= 0.0)
        return index;

    bool found = false;
    std::size_t best_col = 0;
    double best_threshold = 0.0;
    double best_cost = 0.0;
    for (std::size_t col = 0; col < matrix.n_columns(); ++col) {
        std::vector<double> values;
        for (std::size_t idx : samples) values.push_back(matrix.columns[col][idx]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t i = 1; i < values.size(); ++i) {
            const double threshold = (values[i - 1] + values[i]) / 2.0;
            const double cost = partition_sse(matrix, samples, col, threshold, true) +
                                partition_sse(matrix, samples, col, threshold, false);
            if (!found || cost < best_cost) {
                found = true;
                best_col = col;
                best_threshold = threshold;
                best_cost = cost;
            }
        }
    }
    if (!found) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t idx : samples)
        (matrix.columns[best_col][idx] <= best_threshold ? left : right).push_back(idx);
    const int left_index = oracle_build(matrix, std::move(left), min_samples_split, tree);
    const int right_index = oracle_build(matrix, std::move(right), min_samples_split, tree);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    node.column = static_cast<int>(best_col);
    node.threshold = best_threshold;
    node.left = left_index;
    node.right = right_index;
    return index;
}

bool nodes_equal(const RegressionTree& a, int ia, const RegressionTree& b, int ib) {
    const TreeNode& na = a.nodes[static_cast<std::size_t>(ia)];
    const TreeNode& nb = b.nodes[static_cast<std::size_t>(ib)];
    if (na.column != nb.column) return false;
    if (na.column < 0) return na.value == nb.value;
    if (na.threshold != nb.threshold) return false;
    return nodes_equal(a, na.left, b, nb.left) && nodes_equal(a, na.right, b, nb.right);
}

}  // namespace

RegressionTree oracle_fit_tree(const FeatureMatrix& matrix, std::size_t min_samples_split) {
    std::vector<std::size_t> samples(matrix.n_rows);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = i;
    RegressionTree tree;
    oracle_build(matrix, std::move(samples), min_samples_split, tree);
    return tree;
}

bool trees_equal(const RegressionTree& a, const RegressionTree& b) {
    if (a.nodes.empty() || b.nodes.empty()) return a.nodes.empty() == b.nodes.empty();
    return nodes_equal(a, 0, b, 0);
}

}  // namespace itts::testing
