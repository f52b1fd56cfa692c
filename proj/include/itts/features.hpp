#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itts/corpus.hpp"

namespace itts {

// Per-token predictors of drift. Missing numeric values (out-of-range
// neighbors, absent annotations) carry sentinel -1 plus a companion validity
// column in the expanded matrix; categorical slots get explicit tags.
struct FeatureRow {
    std::string sentence_id;
    int n = 0;

    int token_length = 0;
    std::string pos;                       // tag, or <untagged>/<space>/<punct>
    long long training_frequency = -1;     // -1 = absent
    double relative_position = 0.0;        // n/N in (0,1]
    bool penultimate = false;              // n == N-1
    bool followed_by_punctuation = false;  // is x_{n+1} a punctuation mark
    int distance_to_punctuation = -1;      // tokens strictly before next punct
    int distance_to_parent_phrase_end = -1;

    // Neighbor slots m = 1..M; <oob> / -1 where n±m leaves the sentence.
    std::vector<std::string> pos_prev;
    std::vector<std::string> pos_next;
    std::vector<int> word_length_prev;
    std::vector<int> word_length_next;

    double target = 0.0;  // d(n, k_target), attached by the pipeline
};

inline constexpr int kDefaultNeighborWindow = 4;

FeatureRow extract_features(const AnnotatedSentence& sentence, int n,
                            int neighbor_window = kDefaultNeighborWindow);

std::vector<FeatureRow> extract_feature_rows(const AnnotatedSentence& sentence,
                                             int neighbor_window = kDefaultNeighborWindow);

// Numeric design matrix. Original features expand to one or more columns:
// categoricals one-hot over the tags observed in the data, optional numerics
// to a (value, valid) pair. Elimination and permutation work on original
// features; the trees see columns.
struct FeatureMatrix {
    std::vector<std::string> feature_names;                    // original granularity
    std::vector<std::pair<std::size_t, std::size_t>> feature_columns;  // [begin, end) per feature
    std::vector<std::string> column_names;
    std::size_t n_rows = 0;
    std::vector<std::vector<double>> columns;  // column-major
    std::vector<double> target;
    std::vector<std::string> row_sentence;     // sentence id per row

    std::size_t n_columns() const { return columns.size(); }
    double at(std::size_t row, std::size_t col) const { return columns[col][row]; }
    int feature_of_column(std::size_t col) const;

    // Adds a single-column feature (tests, random probe).
    void add_column(const std::string& name, std::vector<double> values);
    FeatureMatrix select_features(std::span<const std::string> names) const;
    FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
};

FeatureMatrix build_feature_matrix(std::span<const FeatureRow> rows);

void write_feature_matrix_csv(const FeatureMatrix& m, const std::string& path);

}  // namespace itts
