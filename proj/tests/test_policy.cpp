#include <doctest.h>

#include "itts/error.hpp"
#include "itts/policy.hpp"
#include "itts/rng.hpp"
#include "itts/synthetic.hpp"
#include "support/test_util.hpp"

using namespace itts;
using namespace itts::testing;

TEST_CASE("context_size follows c(n,k) = min(n+k, N)") {
    CHECK(context_size(3, 0, 12) == 3);
    CHECK(context_size(3, 1, 12) == 4);
    CHECK(context_size(3, 2, 12) == 5);
    CHECK(context_size(3, 8, 12) == 11);
    CHECK(context_size(3, 9, 12) == 12);
    CHECK(context_size(12, 0, 12) == 12);
    CHECK_THROWS_AS(context_size(0, 1, 12), IndexError);
    CHECK_THROWS_AS(context_size(13, 1, 12), IndexError);
    CHECK_THROWS_AS(context_size(3, -1, 12), IndexError);
}

TEST_CASE("context_size is monotone in n and k") {
    const int N = 9;
    for (int n = 1; n <= N; ++n)
        for (int k = 0; k <= 10; ++k) {
            const int c = context_size(n, k, N);
            CHECK(c <= N);
            if (n < N) CHECK(context_size(n + 1, k, N) >= c);
            CHECK(context_size(n, k + 1, N) >= c);
        }
}

TEST_CASE("prefix_text concatenates token texts up to c") {
    const Sentence s = tokenize("The dog is in the yard.");
    CHECK(prefix_text(s, 3) == "The dog");
    CHECK(prefix_text(s, 4) == "The dog ");
    CHECK(prefix_text(s, 5) == "The dog is");
    CHECK(prefix_text(s, 11) == "The dog is in the yard");
    CHECK(prefix_text(s, 12) == "The dog is in the yard.");
    CHECK(prefix_text(s, s.length()) == s.raw);
    CHECK_THROWS_AS(prefix_text(s, 0), IndexError);
    CHECK_THROWS_AS(prefix_text(s, 13), IndexError);
}

TEST_CASE("encode_incremental on a single-token sentence saturates immediately") {
    const EncoderConfig config = small_config(41);
    const EncoderWeights w = init_weights(config);
    const Sentence s = tokenize("Hi");
    for (int k : {0, 1, 5}) {
        const EncodingTrace trace = encode_incremental(s, k, w, config);
        REQUIRE(trace.steps.size() == 1);
        CHECK(trace.steps[0].c == 1);
        CHECK(trace.steps[0].vectors[0].z == trace.full[0].z);
        CHECK(trace.full[0].full_context);
    }
}

TEST_CASE("encode_incremental consumes the prefix at c(n,k) token boundaries") {
    const EncoderConfig config = small_config(42);
    const EncoderWeights w = init_weights(config);
    const Sentence s = tokenize("The dog is in the yard.");
    const EncodingTrace trace = encode_incremental(s, 1, w, config);
    REQUIRE(trace.steps.size() == 12);
    // n=3, k=1: prefix covers 4 tokens, "The dog "
    CHECK(trace.steps[2].c == 4);
    CHECK(prefix_text(s, trace.steps[2].c) == "The dog ");
    for (int n = 1; n <= 12; ++n) {
        const auto& step = trace.steps[static_cast<std::size_t>(n - 1)];
        CHECK(step.n == n);
        CHECK(step.c == context_size(n, 1, 12));
        CHECK(static_cast<int>(step.vectors.size()) == step.c);
        for (const auto& tv : step.vectors) CHECK(tv.context_tokens == step.c);
    }
}

TEST_CASE("work bound: exactly N prefix encodings plus one full encoding") {
    const EncoderConfig config = small_config(43);
    const EncoderWeights w = init_weights(config);
    const Sentence s = tokenize("One two three.");
    EncodeStats stats;
    encode_incremental(s, 2, w, config, {}, &stats);
    CHECK(stats.prefix_encodings == static_cast<std::size_t>(s.length()));
    CHECK(stats.full_encodings == 1);
}

TEST_CASE("saturation: k >= N-n makes incremental vectors bit-equal to full") {
    const EncoderConfig config = small_config(44);
    const EncoderWeights w = init_weights(config);
    SyntheticCorpusParams params;
    params.num_sentences = 20;
    params.seed = 1234;
    params.min_words = 3;
    params.max_words = 8;
    for (const auto& as : generate_corpus(params)) {
        const int N = as.sentence.length();
        const EncodingTrace trace = encode_incremental(as.sentence, N - 1, w, config);
        for (int n = 1; n <= N; ++n) {
            const auto& step = trace.steps[static_cast<std::size_t>(n - 1)];
            CHECK(step.c == N);
            CHECK(step.vectors[static_cast<std::size_t>(n - 1)].z ==
                  trace.full[static_cast<std::size_t>(n - 1)].z);
        }
    }
}

TEST_CASE("forward cache on and off give bit-identical traces") {
    const EncoderConfig config = small_config(45);
    const EncoderWeights w = init_weights(config);
    SyntheticCorpusParams params;
    params.num_sentences = 6;
    params.seed = 77;
    params.min_words = 4;
    params.max_words = 10;
    EncodeOptions cached;
    cached.forward_cache = true;
    for (const auto& as : generate_corpus(params)) {
        for (int k : {0, 1, 3}) {
            const EncodingTrace plain = encode_incremental(as.sentence, k, w, config);
            const EncodingTrace fast = encode_incremental(as.sentence, k, w, config, cached);
            REQUIRE(plain.steps.size() == fast.steps.size());
            for (std::size_t i = 0; i < plain.steps.size(); ++i) {
                REQUIRE(plain.steps[i].vectors.size() == fast.steps[i].vectors.size());
                for (std::size_t j = 0; j < plain.steps[i].vectors.size(); ++j)
                    REQUIRE(plain.steps[i].vectors[j].z == fast.steps[i].vectors[j].z);
            }
            for (std::size_t i = 0; i < plain.full.size(); ++i)
                REQUIRE(plain.full[i].z == fast.full[i].z);
        }
    }
}

TEST_CASE("encode_all_prefixes agrees with per-k incremental traces") {
    const EncoderConfig config = small_config(46);
    const EncoderWeights w = init_weights(config);
    const Sentence s = tokenize("A narrow garden, but luminous.");
    const PrefixTable table = encode_all_prefixes(s, w, config);
    REQUIRE(table.by_c.size() == static_cast<std::size_t>(s.length()));
    for (int k : {0, 1, 2, 5}) {
        const EncodingTrace trace = encode_incremental(s, k, w, config);
        for (int n = 1; n <= s.length(); ++n) {
            const auto& step = trace.steps[static_cast<std::size_t>(n - 1)];
            CHECK(table.incremental(n, k).z == step.vectors[static_cast<std::size_t>(n - 1)].z);
            CHECK(table.full(n).z == trace.full[static_cast<std::size_t>(n - 1)].z);
        }
    }
}
