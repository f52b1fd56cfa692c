#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "itts/corpus.hpp"
#include "itts/policy.hpp"
#include "itts/stats.hpp"

namespace itts {

// One (sentence, n, k) measurement: cosine distance between the incremental
// and full-context vectors of the same token.
struct DriftRecord {
    std::string sentence_id;
    int n = 0;
    int k = 0;
    double d = 0.0;  // in [0, 2]; exactly 0 at saturation n+k >= N
    TokenCategory category = TokenCategory::ContentWord;
};

// 1 - a.b / (|a| |b|). The denominator is computed as sqrt(aa * bb), which
// makes d(a, a) exactly zero in round-to-nearest arithmetic.
double cosine_distance(std::span<const float> a, std::span<const float> b);

std::vector<DriftRecord> compute_drift(const EncodingTrace& trace,
                                       const std::vector<AnnotatedToken>& annotations);

// Every (n, k) pair for k = 0..k_max off one prefix table; record-for-record
// equal to running compute_drift on per-k encode_incremental traces.
std::vector<DriftRecord> compute_drift_all_k(const Sentence& sentence,
                                             const std::vector<AnnotatedToken>& annotations,
                                             int k_max, const PrefixTable& table);

struct SummaryCell {
    double mean = 0.0;
    double stddev = 0.0;  // population form (error bars describe the data)
    std::size_t count = 0;
};

struct DriftSummary {
    int k_max = 0;
    // cells[k][category] and overall[k]; categories indexed by TokenCategory.
    std::vector<std::array<SummaryCell, 4>> per_category;
    std::vector<SummaryCell> overall;
    // r(k) = 1 - mean_d(k) / mean_d(0); how far towards the full-context
    // representation lookahead k travels.
    std::vector<double> closeness;
    bool closeness_degenerate = false;  // mean_d(0) == 0; r reported as 1
};

DriftSummary summarize(std::span<const DriftRecord> records, int k_max);

struct LookaheadTest {
    int k_low = 0;
    int k_high = 0;
    TTestResult result;
};

// Paired t-test of d(.,k) against d(.,k+1) over identical (sentence, n)
// units, one per consecutive pair up to k_max.
std::vector<LookaheadTest> consecutive_lookahead_tests(std::span<const DriftRecord> records,
                                                       int k_max);

}  // namespace itts
