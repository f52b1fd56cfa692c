#include "itts/features.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "itts/csv.hpp"
#include "itts/error.hpp"

namespace itts {

namespace {

std::string pos_tag_of(const AnnotatedToken& at) {
    if (at.pos) return *at.pos;
    switch (at.token.kind) {
        case TokenKind::Space: return "<space>";
        case TokenKind::Punct: return "<punct>";
        case TokenKind::Word: return "<untagged>";
    }
    return "<untagged>";
}

}  // namespace

FeatureRow extract_features(const AnnotatedSentence& sentence, int n, int neighbor_window) {
    const int N = sentence.sentence.length();
    if (n < 1 || n > N) throw IndexError("token index " + std::to_string(n));
    const AnnotatedToken& at = sentence.tokens[static_cast<std::size_t>(n - 1)];

    FeatureRow row;
    row.sentence_id = sentence.sentence.id;
    row.n = n;
    row.token_length = static_cast<int>(at.token.text.size());
    row.pos = pos_tag_of(at);
    row.training_frequency = at.training_frequency ? *at.training_frequency : -1;
    row.relative_position = static_cast<double>(n) / static_cast<double>(N);
    row.penultimate = (n == N - 1);
    row.followed_by_punctuation =
        n < N && sentence.sentence.token(n + 1).kind == TokenKind::Punct;

    row.distance_to_punctuation = -1;
    for (int j = n + 1; j <= N; ++j) {
        if (sentence.sentence.token(j).kind == TokenKind::Punct) {
            row.distance_to_punctuation = j - n - 1;
            break;
        }
    }
    row.distance_to_parent_phrase_end =
        at.tokens_to_parent_phrase_end ? *at.tokens_to_parent_phrase_end : -1;

    for (int m = 1; m <= neighbor_window; ++m) {
        const int prev = n - m;
        const int next = n + m;
        if (prev >= 1) {
            row.pos_prev.push_back(pos_tag_of(sentence.tokens[static_cast<std::size_t>(prev - 1)]));
            row.word_length_prev.push_back(
                static_cast<int>(sentence.sentence.token(prev).text.size()));
        } else {
            row.pos_prev.push_back("<oob>");
            row.word_length_prev.push_back(-1);
        }
        if (next <= N) {
            row.pos_next.push_back(pos_tag_of(sentence.tokens[static_cast<std::size_t>(next - 1)]));
            row.word_length_next.push_back(
                static_cast<int>(sentence.sentence.token(next).text.size()));
        } else {
            row.pos_next.push_back("<oob>");
            row.word_length_next.push_back(-1);
        }
    }
    return row;
}

std::vector<FeatureRow> extract_feature_rows(const AnnotatedSentence& sentence,
                                             int neighbor_window) {
    std::vector<FeatureRow> rows;
    const int N = sentence.sentence.length();
    rows.reserve(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) rows.push_back(extract_features(sentence, n, neighbor_window));
    return rows;
}

int FeatureMatrix::feature_of_column(std::size_t col) const {
    for (std::size_t f = 0; f < feature_columns.size(); ++f)
        if (col >= feature_columns[f].first && col < feature_columns[f].second)
            return static_cast<int>(f);
    return -1;
}

void FeatureMatrix::add_column(const std::string& name, std::vector<double> values) {
    if (n_rows != 0 && values.size() != n_rows)
        throw ShapeError(name, "column length mismatch");
    if (n_rows == 0) n_rows = values.size();
    feature_names.push_back(name);
    feature_columns.emplace_back(columns.size(), columns.size() + 1);
    column_names.push_back(name);
    columns.push_back(std::move(values));
}

FeatureMatrix FeatureMatrix::select_features(std::span<const std::string> names) const {
    FeatureMatrix out;
    out.n_rows = n_rows;
    out.target = target;
    out.row_sentence = row_sentence;
    for (const auto& name : names) {
        const auto it = std::find(feature_names.begin(), feature_names.end(), name);
        if (it == feature_names.end()) throw NotFound("feature '" + name + "'");
        const std::size_t f = static_cast<std::size_t>(it - feature_names.begin());
        const auto [begin, end] = feature_columns[f];
        out.feature_names.push_back(name);
        out.feature_columns.emplace_back(out.columns.size(), out.columns.size() + (end - begin));
        for (std::size_t c = begin; c < end; ++c) {
            out.column_names.push_back(column_names[c]);
            out.columns.push_back(columns[c]);
        }
    }
    return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
    FeatureMatrix out;
    out.feature_names = feature_names;
    out.feature_columns = feature_columns;
    out.column_names = column_names;
    out.n_rows = rows.size();
    out.columns.resize(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.columns[c].reserve(rows.size());
        for (std::size_t r : rows) out.columns[c].push_back(columns[c][r]);
    }
    out.target.reserve(rows.size());
    out.row_sentence.reserve(rows.size());
    for (std::size_t r : rows) {
        out.target.push_back(target[r]);
        out.row_sentence.push_back(row_sentence[r]);
    }
    return out;
}

namespace {

// Tags observed for a categorical slot, sorted for a deterministic layout.
std::vector<std::string> sorted_tags(std::span<const FeatureRow> rows,
                                     const std::string& (*get)(const FeatureRow&, int), int m) {
    std::set<std::string> tags;
    for (const auto& row : rows) tags.insert(get(row, m));
    return {tags.begin(), tags.end()};
}

const std::string& get_pos(const FeatureRow& r, int) { return r.pos; }
const std::string& get_pos_prev(const FeatureRow& r, int m) {
    return r.pos_prev[static_cast<std::size_t>(m)];
}
const std::string& get_pos_next(const FeatureRow& r, int m) {
    return r.pos_next[static_cast<std::size_t>(m)];
}

}  // namespace

FeatureMatrix build_feature_matrix(std::span<const FeatureRow> rows) {
    if (rows.empty()) throw EmptyData("no feature rows");
    const std::size_t window = rows.front().pos_prev.size();
    for (const auto& row : rows)
        if (row.pos_prev.size() != window || row.pos_next.size() != window)
            throw ShapeError("feature rows", "inconsistent neighbor windows");

    FeatureMatrix m;
    m.n_rows = rows.size();
    m.target.reserve(rows.size());
    m.row_sentence.reserve(rows.size());
    for (const auto& row : rows) {
        m.target.push_back(row.target);
        m.row_sentence.push_back(row.sentence_id);
    }

    const auto add_feature = [&m](const std::string& name,
                                  std::vector<std::pair<std::string, std::vector<double>>> cols) {
        m.feature_names.push_back(name);
        m.feature_columns.emplace_back(m.columns.size(), m.columns.size() + cols.size());
        for (auto& [cname, values] : cols) {
            m.column_names.push_back(cname);
            m.columns.push_back(std::move(values));
        }
    };

    const auto numeric = [&rows](auto getter) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& row : rows) v.push_back(static_cast<double>(getter(row)));
        return v;
    };
    const auto optional_numeric = [&](const std::string& name, auto getter) {
        std::vector<double> value = numeric(getter);
        std::vector<double> valid;
        valid.reserve(rows.size());
        for (const auto& row : rows) valid.push_back(getter(row) >= 0 ? 1.0 : 0.0);
        add_feature(name, {{name, std::move(value)}, {name + "_valid", std::move(valid)}});
    };
    const auto categorical = [&](const std::string& name,
                                 const std::string& (*get)(const FeatureRow&, int), int mi) {
        std::vector<std::pair<std::string, std::vector<double>>> cols;
        for (const auto& tag : sorted_tags(rows, get, mi)) {
            std::vector<double> v;
            v.reserve(rows.size());
            for (const auto& row : rows) v.push_back(get(row, mi) == tag ? 1.0 : 0.0);
            cols.emplace_back(name + "=" + tag, std::move(v));
        }
        add_feature(name, std::move(cols));
    };

    add_feature("token_length", {{"token_length", numeric([](const FeatureRow& r) { return r.token_length; })}});
    categorical("pos", get_pos, 0);
    optional_numeric("training_frequency",
                     [](const FeatureRow& r) { return r.training_frequency; });
    add_feature("relative_position",
                {{"relative_position", numeric([](const FeatureRow& r) { return r.relative_position; })}});
    add_feature("penultimate",
                {{"penultimate", numeric([](const FeatureRow& r) { return r.penultimate ? 1 : 0; })}});
    add_feature("followed_by_punctuation",
                {{"followed_by_punctuation",
                  numeric([](const FeatureRow& r) { return r.followed_by_punctuation ? 1 : 0; })}});
    optional_numeric("distance_to_punctuation",
                     [](const FeatureRow& r) { return r.distance_to_punctuation; });
    optional_numeric("distance_to_parent_phrase_end",
                     [](const FeatureRow& r) { return r.distance_to_parent_phrase_end; });

    for (std::size_t mi = 0; mi < window; ++mi) {
        const std::string suffix = std::to_string(mi + 1);
        categorical("pos_prev_" + suffix, get_pos_prev, static_cast<int>(mi));
        optional_numeric("word_length_prev_" + suffix, [mi](const FeatureRow& r) {
            return r.word_length_prev[mi];
        });
        categorical("pos_next_" + suffix, get_pos_next, static_cast<int>(mi));
        optional_numeric("word_length_next_" + suffix, [mi](const FeatureRow& r) {
            return r.word_length_next[mi];
        });
    }
    return m;
}

void write_feature_matrix_csv(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "sentence_id";
    for (const auto& name : m.column_names) out << ',' << name;
    out << ",target\n";
    for (std::size_t r = 0; r < m.n_rows; ++r) {
        out << m.row_sentence[r];
        for (std::size_t c = 0; c < m.columns.size(); ++c) out << ',' << csv::format(m.at(r, c));
        out << ',' << csv::format(m.target[r]) << '\n';
    }
}

}  // namespace itts
