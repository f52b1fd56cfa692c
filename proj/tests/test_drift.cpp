#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "itts/drift.hpp"
#include "itts/error.hpp"
#include "itts/rng.hpp"
#include "itts/synthetic.hpp"
#include "support/test_util.hpp"

using namespace itts;
using namespace itts::testing;

TEST_CASE("cosine distance basics") {
    const std::vector<float> e1 = {1.0f, 0.0f};
    const std::vector<float> e2 = {0.0f, 1.0f};
    const std::vector<float> v = {0.3f, -0.7f};
    const std::vector<float> nv = {-0.3f, 0.7f};
    CHECK(cosine_distance(e1, e1) == 0.0);
    CHECK(cosine_distance(e1, e2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_distance(v, nv) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(cosine_distance(std::vector<float>{0.0f, 0.0f}, e1), DegenerateVector);
    CHECK_THROWS_AS(cosine_distance(std::vector<float>{1.0f}, e1), ShapeError);
}

TEST_CASE("cosine distance of a vector with itself is exactly zero") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(80);
        std::vector<float> v(n);
        bool nonzero = false;
        for (auto& x : v) {
            x = rng.uniform_float(-3.0f, 3.0f);
            if (x != 0.0f) nonzero = true;
        }
        if (!nonzero) v[0] = 1.0f;
        CHECK(cosine_distance(v, v) == 0.0);
    }
}

TEST_CASE("cosine distance properties: symmetry, range, scale invariance") {
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        std::vector<float> a(n), b(n);
        for (auto& x : a) x = rng.uniform_float(-1.0f, 1.0f);
        for (auto& x : b) x = rng.uniform_float(-1.0f, 1.0f);
        a[0] += 1.5f;
        b[0] -= 1.5f;
        const double d = cosine_distance(a, b);
        CHECK(d >= 0.0);
        CHECK(d <= 2.0);
        CHECK(cosine_distance(b, a) == d);

        std::vector<float> a2(n), b2(n);
        for (std::size_t i = 0; i < n; ++i) {
            a2[i] = 0.25f * a[i];
            b2[i] = 3.0f * b[i];
        }
        CHECK(cosine_distance(a2, b2) == doctest::Approx(d).epsilon(1e-6));
    }
}

namespace {

std::vector<DriftRecord> drift_for(const AnnotatedSentence& as, int k_max,
                                   const EncoderConfig& config, const EncoderWeights& weights) {
    const PrefixTable table = encode_all_prefixes(as.sentence, weights, config);
    return compute_drift_all_k(as.sentence, as.tokens, k_max, table);
}

}  // namespace

TEST_CASE("saturation produces exact zeros; single-token sentences trivially so") {
    const EncoderConfig config = small_config(51);
    const EncoderWeights w = init_weights(config);

    const AnnotatedSentence hi = annotate_plain(tokenize("Hi", "hi"));
    const auto hi_records = drift_for(hi, 3, config, w);
    REQUIRE(hi_records.size() == 4);
    for (const auto& rec : hi_records) CHECK(rec.d == 0.0);

    const AnnotatedSentence yard = annotate_plain(tokenize("The dog is in the yard.", "yard"));
    const int N = yard.sentence.length();
    for (const auto& rec : drift_for(yard, 14, config, w)) {
        if (rec.n + rec.k >= N) CHECK(rec.d == 0.0);
        CHECK(rec.d >= 0.0);
        CHECK(rec.d <= 2.0);
    }
}

TEST_CASE("compute_drift matches the per-k trace route") {
    const EncoderConfig config = small_config(52);
    const EncoderWeights w = init_weights(config);
    const AnnotatedSentence as = annotate_plain(tokenize("A red dog runs.", "s"));
    const PrefixTable table = encode_all_prefixes(as.sentence, w, config);
    const auto all = compute_drift_all_k(as.sentence, as.tokens, 3, table);
    for (int k = 0; k <= 3; ++k) {
        const EncodingTrace trace = encode_incremental(as.sentence, k, w, config);
        const auto per_k = compute_drift(trace, as.tokens);
        for (const auto& rec : per_k) {
            const auto it = std::find_if(all.begin(), all.end(), [&](const DriftRecord& r) {
                return r.n == rec.n && r.k == rec.k;
            });
            REQUIRE(it != all.end());
            CHECK(it->d == rec.d);
            CHECK(it->category == rec.category);
        }
    }
}

TEST_CASE("summarize computes means, deviations and closeness ratios") {
    std::vector<DriftRecord> records;
    const auto add = [&records](int n, int k, double d, TokenCategory cat) {
        records.push_back({"s", n, k, d, cat});
    };
    add(1, 0, 0.2, TokenCategory::ContentWord);
    add(2, 0, 0.4, TokenCategory::FunctionWord);
    add(1, 1, 0.1, TokenCategory::ContentWord);
    add(2, 1, 0.1, TokenCategory::FunctionWord);

    const DriftSummary s = summarize(records, 1);
    CHECK(s.overall[0].mean == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s.overall[0].stddev == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.overall[0].count == 2);
    CHECK(s.closeness[0] == 0.0);
    CHECK(s.closeness[1] == doctest::Approx(1.0 - 0.1 / 0.3).epsilon(1e-12));
    CHECK_FALSE(s.closeness_degenerate);
    CHECK(s.per_category[0][static_cast<std::size_t>(TokenCategory::ContentWord)].mean ==
          doctest::Approx(0.2));

    // permutation invariance
    std::vector<DriftRecord> shuffled = {records[3], records[1], records[2], records[0]};
    const DriftSummary s2 = summarize(shuffled, 1);
    CHECK(s2.overall[0].mean == s.overall[0].mean);
    CHECK(s2.overall[1].stddev == s.overall[1].stddev);
    CHECK(s2.closeness[1] == s.closeness[1]);

    CHECK_THROWS_AS(summarize(std::vector<DriftRecord>{}, 1), EmptyData);
}

TEST_CASE("summarize flags the all-zero degenerate corpus") {
    std::vector<DriftRecord> records;
    for (int k = 0; k <= 2; ++k)
        records.push_back({"s", 1, k, 0.0, TokenCategory::Space});
    const DriftSummary s = summarize(records, 2);
    CHECK(s.closeness_degenerate);
    for (double r : s.closeness) CHECK(r == 1.0);
    CHECK(s.overall[0].mean == 0.0);
}

TEST_CASE("consecutive lookahead tests pair identical units") {
    std::vector<DriftRecord> records;
    // all zero: degenerate, p = 1
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k <= 2; ++k) records.push_back({"s", n, k, 0.0, TokenCategory::Space});
    auto tests = consecutive_lookahead_tests(records, 2);
    REQUIRE(tests.size() == 2);
    for (const auto& t : tests) {
        CHECK(t.result.degenerate);
        CHECK(t.result.p == 1.0);
    }

    // constant improvement of exactly 0.01: sd of diffs 0, p = 0
    records.clear();
    for (int n = 1; n <= 5; ++n)
        for (int k = 0; k <= 1; ++k)
            records.push_back({"s", n, k, 0.5 - 0.01 * k, TokenCategory::ContentWord});
    tests = consecutive_lookahead_tests(records, 1);
    REQUIRE(tests.size() == 1);
    CHECK(tests[0].result.degenerate);
    CHECK(tests[0].result.p == 0.0);
    CHECK(tests[0].k_low == 0);
    CHECK(tests[0].k_high == 1);

    CHECK_THROWS_AS(consecutive_lookahead_tests(std::vector<DriftRecord>{}, 1), EmptyData);
}

TEST_CASE("drift of a seeded sentence decreases with lookahead on average") {
    const EncoderConfig config = small_config(53);
    const EncoderWeights w = init_weights(config);
    SyntheticCorpusParams params;
    params.num_sentences = 8;
    params.seed = 4242;
    params.min_words = 6;
    params.max_words = 12;
    std::vector<DriftRecord> records;
    for (const auto& as : generate_corpus(params)) {
        auto block = drift_for(as, 4, config, w);
        records.insert(records.end(), block.begin(), block.end());
    }
    const DriftSummary s = summarize(records, 4);
    CHECK(s.overall[0].mean > s.overall[1].mean);
    CHECK(s.overall[1].mean > s.overall[2].mean);
    CHECK(s.closeness[1] > 0.0);
    CHECK(s.closeness[2] > s.closeness[1]);
}
