#include "itts/policy.hpp"

#include <algorithm>

#include "itts/error.hpp"

namespace itts {

int context_size(int n, int k, int N) {
    if (n < 1 || n > N) throw IndexError("token index " + std::to_string(n) + " for N=" + std::to_string(N));
    if (k < 0) throw IndexError("negative lookahead");
    return std::min(n + k, N);
}

std::string prefix_text(const Sentence& sentence, int c) {
    if (c < 1 || c > sentence.length()) throw IndexError("prefix token count " + std::to_string(c));
    const Token& last = sentence.token(c);
    return sentence.raw.substr(0, last.char_end);
}

namespace {

std::vector<TokenVector> extract_all(const CharStates& states, const Sentence& sentence, int c,
                                     int N) {
    std::vector<TokenVector> out;
    out.reserve(static_cast<std::size_t>(c));
    for (int j = 1; j <= c; ++j) {
        TokenVector tv = extract_token_vector(states, sentence, j);
        tv.context_tokens = c;
        tv.full_context = (c == N);
        out.push_back(std::move(tv));
    }
    return out;
}

}  // namespace

EncodingTrace encode_incremental(const Sentence& sentence, int k, const EncoderWeights& weights,
                                 const EncoderConfig& config, const EncodeOptions& options,
                                 EncodeStats* stats) {
    const int N = sentence.length();
    if (N == 0) throw EmptyInput();
    if (k < 0) throw IndexError("negative lookahead");

    EncodingTrace trace;
    trace.sentence_id = sentence.id;
    trace.k = k;
    trace.steps.reserve(static_cast<std::size_t>(N));

    IncrementalEncoder cached(weights, config);
    for (int n = 1; n <= N; ++n) {
        const int c = context_size(n, k, N);
        const std::string text = prefix_text(sentence, c);
        const CharStates states =
            options.forward_cache ? cached.encode(text) : encode_chars(text, weights, config);
        if (stats) ++stats->prefix_encodings;
        PrefixEncoding step;
        step.n = n;
        step.k = k;
        step.c = c;
        step.vectors = extract_all(states, sentence, c, N);
        trace.steps.push_back(std::move(step));
    }

    const CharStates full_states = options.forward_cache
                                       ? cached.encode(sentence.raw)
                                       : encode_chars(sentence.raw, weights, config);
    if (stats) ++stats->full_encodings;
    trace.full = extract_all(full_states, sentence, N, N);
    return trace;
}

const TokenVector& PrefixTable::incremental(int n, int k) const {
    const int N = static_cast<int>(by_c.size());
    const int c = context_size(n, k, N);
    return by_c[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(n - 1)];
}

const TokenVector& PrefixTable::full(int n) const {
    const int N = static_cast<int>(by_c.size());
    if (n < 1 || n > N) throw IndexError("token index " + std::to_string(n));
    return by_c.back()[static_cast<std::size_t>(n - 1)];
}

PrefixTable encode_all_prefixes(const Sentence& sentence, const EncoderWeights& weights,
                                const EncoderConfig& config, const EncodeOptions& options) {
    const int N = sentence.length();
    if (N == 0) throw EmptyInput();

    PrefixTable table;
    table.by_c.reserve(static_cast<std::size_t>(N));
    IncrementalEncoder cached(weights, config);
    for (int c = 1; c <= N; ++c) {
        const std::string text = prefix_text(sentence, c);
        const CharStates states =
            options.forward_cache ? cached.encode(text) : encode_chars(text, weights, config);
        table.by_c.push_back(extract_all(states, sentence, c, N));
    }
    return table;
}

}  // namespace itts
