#include "itts/drift.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "itts/error.hpp"
#include "itts/kernels.hpp"

namespace itts {

double cosine_distance(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw ShapeError("cosine operands", "dimension mismatch");
    if (a.empty()) throw ShapeError("cosine operands", "empty vectors");
    const double ab = kernels::dot_f32(a.data(), b.data(), a.size());
    const double aa = kernels::dot_f32(a.data(), a.data(), a.size());
    const double bb = kernels::dot_f32(b.data(), b.data(), b.size());
    if (aa == 0.0 || bb == 0.0) throw DegenerateVector("zero norm");
    return 1.0 - ab / std::sqrt(aa * bb);
}

namespace {

double token_drift(const TokenVector& inc, const TokenVector& full, const std::string& id, int n,
                   int k) {
    try {
        return cosine_distance(inc.z, full.z);
    } catch (const DegenerateVector&) {
        throw DegenerateVector("sentence " + id + ", n=" + std::to_string(n) +
                               ", k=" + std::to_string(k));
    }
}

}  // namespace

std::vector<DriftRecord> compute_drift(const EncodingTrace& trace,
                                       const std::vector<AnnotatedToken>& annotations) {
    const std::size_t n_tokens = trace.full.size();
    if (annotations.size() != n_tokens)
        throw ShapeError("annotations", "token count differs from trace");

    std::vector<DriftRecord> records;
    records.reserve(n_tokens);
    for (std::size_t i = 0; i < n_tokens; ++i) {
        const int n = static_cast<int>(i) + 1;
        const PrefixEncoding& step = trace.steps[i];
        const TokenVector& inc = step.vectors[i];
        DriftRecord rec;
        rec.sentence_id = trace.sentence_id;
        rec.n = n;
        rec.k = trace.k;
        rec.d = token_drift(inc, trace.full[i], trace.sentence_id, n, trace.k);
        rec.category = categorize(annotations[i]);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<DriftRecord> compute_drift_all_k(const Sentence& sentence,
                                             const std::vector<AnnotatedToken>& annotations,
                                             int k_max, const PrefixTable& table) {
    const int N = sentence.length();
    if (static_cast<int>(annotations.size()) != N)
        throw ShapeError("annotations", "token count differs from sentence");

    std::vector<DriftRecord> records;
    records.reserve(static_cast<std::size_t>(N) * static_cast<std::size_t>(k_max + 1));
    for (int n = 1; n <= N; ++n) {
        const TokenCategory cat = categorize(annotations[static_cast<std::size_t>(n - 1)]);
        for (int k = 0; k <= k_max; ++k) {
            DriftRecord rec;
            rec.sentence_id = sentence.id;
            rec.n = n;
            rec.k = k;
            rec.d = token_drift(table.incremental(n, k), table.full(n), sentence.id, n, k);
            rec.category = cat;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

DriftSummary summarize(std::span<const DriftRecord> records, int k_max) {
    if (records.empty()) throw EmptyData("no drift records");

    DriftSummary s;
    s.k_max = k_max;
    s.per_category.resize(static_cast<std::size_t>(k_max + 1));
    s.overall.resize(static_cast<std::size_t>(k_max + 1));
    s.closeness.resize(static_cast<std::size_t>(k_max + 1), 0.0);

    std::vector<std::array<std::vector<double>, 4>> by_cat(static_cast<std::size_t>(k_max + 1));
    std::vector<std::vector<double>> all(static_cast<std::size_t>(k_max + 1));
    for (const auto& rec : records) {
        if (rec.k < 0 || rec.k > k_max) continue;
        const auto k = static_cast<std::size_t>(rec.k);
        by_cat[k][static_cast<std::size_t>(rec.category)].push_back(rec.d);
        all[k].push_back(rec.d);
    }

    const auto cell_of = [](const std::vector<double>& xs) {
        SummaryCell cell;
        cell.count = xs.size();
        if (!xs.empty()) {
            cell.mean = mean(xs);
            cell.stddev = population_stddev(xs);
        }
        return cell;
    };

    for (int k = 0; k <= k_max; ++k) {
        const auto ki = static_cast<std::size_t>(k);
        for (std::size_t cat = 0; cat < 4; ++cat)
            s.per_category[ki][cat] = cell_of(by_cat[ki][cat]);
        s.overall[ki] = cell_of(all[ki]);
    }

    const double base = s.overall[0].mean;
    if (base == 0.0) {
        s.closeness_degenerate = true;
        for (int k = 0; k <= k_max; ++k) s.closeness[static_cast<std::size_t>(k)] = 1.0;
    } else {
        for (int k = 0; k <= k_max; ++k)
            s.closeness[static_cast<std::size_t>(k)] = 1.0 - s.overall[static_cast<std::size_t>(k)].mean / base;
    }
    return s;
}

std::vector<LookaheadTest> consecutive_lookahead_tests(std::span<const DriftRecord> records,
                                                       int k_max) {
    if (records.empty()) throw EmptyData("no drift records");

    // (sentence, n) -> d at each k, keyed in first-appearance order so the
    // pairing is stable under record permutation.
    std::map<std::pair<std::string, int>, std::vector<double>> units;
    for (const auto& rec : records) {
        if (rec.k < 0 || rec.k > k_max) continue;
        auto& ds = units[{rec.sentence_id, rec.n}];
        if (ds.empty()) ds.assign(static_cast<std::size_t>(k_max + 1), -1.0);
        ds[static_cast<std::size_t>(rec.k)] = rec.d;
    }

    std::vector<LookaheadTest> tests;
    for (int k = 0; k < k_max; ++k) {
        std::vector<double> x, y;
        x.reserve(units.size());
        y.reserve(units.size());
        for (const auto& [key, ds] : units) {
            const double dk = ds[static_cast<std::size_t>(k)];
            const double dk1 = ds[static_cast<std::size_t>(k + 1)];
            if (dk < 0.0 || dk1 < 0.0)
                throw EmptyData("missing drift record for sentence " + key.first + ", n=" +
                                std::to_string(key.second) + " at k=" + std::to_string(k));
            x.push_back(dk);
            y.push_back(dk1);
        }
        LookaheadTest t;
        t.k_low = k;
        t.k_high = k + 1;
        t.result = paired_ttest(x, y);
        tests.push_back(std::move(t));
    }
    return tests;
}

}  // namespace itts
