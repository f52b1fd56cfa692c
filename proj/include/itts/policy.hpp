#pragma once

#include <string>
#include <vector>

#include "itts/corpus.hpp"
#include "itts/encoder.hpp"

namespace itts {

// c(n,k) = min(n+k, N): tokens read when generating output for token n.
int context_size(int n, int k, int N);

// Concatenation of token texts 1..c; always ends on a token boundary.
std::string prefix_text(const Sentence& sentence, int c);

// Vectors for positions 1..c obtained after reading tokens 1..c(n,k).
struct PrefixEncoding {
    int n = 0;
    int k = 0;
    int c = 0;
    std::vector<TokenVector> vectors;
};

struct EncodingTrace {
    std::string sentence_id;
    int k = 0;
    std::vector<PrefixEncoding> steps;   // index n-1
    std::vector<TokenVector> full;       // z^full, positions 1..N
};

struct EncodeOptions {
    // Reuse embeddings, stable conv outputs and the forward recurrence across
    // growing prefixes. Guaranteed bit-identical to from-scratch encoding.
    bool forward_cache = false;
};

struct EncodeStats {
    std::size_t prefix_encodings = 0;
    std::size_t full_encodings = 0;
};

// Re-encodes the character prefix covering tokens 1..c(n,k) for each n, plus
// the full sentence once: exactly N prefix encodings and one full encoding.
EncodingTrace encode_incremental(const Sentence& sentence, int k, const EncoderWeights& weights,
                                 const EncoderConfig& config, const EncodeOptions& options = {},
                                 EncodeStats* stats = nullptr);

// Each distinct prefix length c = 1..N encoded once; by_c[c-1] holds vectors
// for positions 1..c. Entry N-1 doubles as the full-context encoding. The
// per-(n,k) encodings of encode_incremental dedupe onto these by determinism.
struct PrefixTable {
    std::vector<std::vector<TokenVector>> by_c;

    const TokenVector& incremental(int n, int k) const;  // z_n^{n,k}
    const TokenVector& full(int n) const;                // z_n^full
};

PrefixTable encode_all_prefixes(const Sentence& sentence, const EncoderWeights& weights,
                                const EncoderConfig& config, const EncodeOptions& options = {});

}  // namespace itts
